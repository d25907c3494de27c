//! Replicate fan-out and batch-means estimators.
//!
//! Replicate `r` always lands in batch `r % BATCHES`, and every accumulator
//! keeps integer sums, so merging partial results in any order gives
//! bit-identical estimates.

use alloc::vec::Vec;

/// Number of batches used for standard errors.
pub const BATCHES: usize = 100;

/// Point estimate with standard error.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub se: f64,
}

impl Estimate {
    pub const fn exact(value: f64) -> Self {
        Self { value, se: 0.0 }
    }

    /// `|self − x| ≤ z · se` (with a floor for exact agreement).
    pub fn agrees_with(&self, x: f64, z: f64) -> bool {
        (self.value - x).abs() <= z * self.se + 1e-12
    }
}

/// Partial result that can absorb another partial result.
pub trait Accumulator: Sized {
    fn merge(&mut self, other: Self);
}

/// Strategy for running `body` over replicates `0..replicates`.
pub trait Fanout {
    fn run<A, M, F>(&self, replicates: u64, make: M, body: F) -> A
    where
        A: Accumulator + Send,
        M: Fn() -> A + Sync + Send,
        F: Fn(&mut A, u64) + Sync + Send;
}

/// Runs replicates in order on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Fanout for Sequential {
    fn run<A, M, F>(&self, replicates: u64, make: M, body: F) -> A
    where
        A: Accumulator + Send,
        M: Fn() -> A + Sync + Send,
        F: Fn(&mut A, u64) + Sync + Send,
    {
        let mut acc = make();
        for r in 0..replicates {
            body(&mut acc, r);
        }
        acc
    }
}

/// Per-batch counts and sums of a non-negative integer observation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntBatches {
    n: Vec<u64>,
    sum: Vec<u128>,
}

impl Default for IntBatches {
    fn default() -> Self {
        Self {
            n: alloc::vec![0; BATCHES],
            sum: alloc::vec![0; BATCHES],
        }
    }
}

impl IntBatches {
    #[inline]
    pub fn add(&mut self, replicate: u64, x: u64) {
        let b = (replicate % BATCHES as u64) as usize;
        self.n[b] += 1;
        self.sum[b] += x as u128;
    }

    pub fn count(&self) -> u64 {
        self.n.iter().sum()
    }

    pub fn total(&self) -> u128 {
        self.sum.iter().sum()
    }

    /// Means of the non-empty batches.
    pub fn batch_means(&self) -> Vec<f64> {
        self.n
            .iter()
            .zip(&self.sum)
            .filter(|(n, _)| **n > 0)
            .map(|(n, s)| *s as f64 / *n as f64)
            .collect()
    }

    pub fn estimate(&self) -> Estimate {
        let count = self.count();
        if count == 0 {
            return Estimate {
                value: f64::NAN,
                se: f64::NAN,
            };
        }
        let value = self.total() as f64 / count as f64;
        Estimate {
            value,
            se: batch_se(&self.batch_means()),
        }
    }
}

impl Accumulator for IntBatches {
    fn merge(&mut self, other: Self) {
        for b in 0..BATCHES {
            self.n[b] += other.n[b];
            self.sum[b] += other.sum[b];
        }
    }
}

/// Standard error of the grand mean from batch means.
pub fn batch_se(means: &[f64]) -> f64 {
    let m = means.len();
    if m < 2 {
        return 0.0;
    }
    let mean = means.iter().sum::<f64>() / m as f64;
    let ss: f64 = means.iter().map(|x| (x - mean) * (x - mean)).sum();
    libm::sqrt(ss / ((m * (m - 1)) as f64))
}

/// Ordinary least-squares slope and intercept of `y` on `x`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
