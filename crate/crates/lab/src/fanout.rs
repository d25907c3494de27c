//! Rayon-backed replicate fan-out.

use cantor_zeros::stats::{Accumulator, Fanout};
use rayon::prelude::*;
use rayon::{ThreadPool, ThreadPoolBuilder};

/// Smallest run of consecutive replicates handed to one task.
const MIN_CHUNK: u64 = 256;

/// Runs replicates on a dedicated pool of `workers` threads. Accumulators
/// merge integer statistics, so results do not depend on scheduling.
pub struct Parallel {
    pool: ThreadPool,
}

impl Parallel {
    pub fn new(workers: usize) -> Self {
        let pool = ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
            .expect("thread pool");
        Self { pool }
    }

    pub fn workers(&self) -> usize {
        self.pool.current_num_threads()
    }
}

impl Fanout for Parallel {
    fn run<A, M, F>(&self, replicates: u64, make: M, body: F) -> A
    where
        A: Accumulator + Send,
        M: Fn() -> A + Sync + Send,
        F: Fn(&mut A, u64) + Sync + Send,
    {
        self.pool.install(|| {
            let chunks = replicates.div_ceil(MIN_CHUNK);
            (0..chunks)
                .into_par_iter()
                .fold(&make, |mut acc, c| {
                    let hi = ((c + 1) * MIN_CHUNK).min(replicates);
                    for r in c * MIN_CHUNK..hi {
                        body(&mut acc, r);
                    }
                    acc
                })
                .reduce(&make, |mut a, b| {
                    a.merge(b);
                    a
                })
        })
    }
}
