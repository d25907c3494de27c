//! Generalized Cantor functions and the zeros of Brownian motion minus such a
//! function.
//!
//! The crate builds the interval families of a generalized (k-ary) Cantor set
//! from a gap sequence `(a_n)`, samples Brownian paths on grids aligned with
//! the interval endpoints, evaluates the endpoint and diagonal hitting events,
//! computes their moments exactly where a Gaussian oracle is available, and
//! evaluates the analytic bounds that separate the positive-probability and
//! zero-probability regimes.
//!
//! Everything here is `no_std` with `alloc`; file formats, the experiment
//! driver and parallel fan-out live in the companion `cantor-lab` crate.

#![no_std]
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod brownian;
pub mod cantor;
pub mod error;
pub mod events;
pub mod rng;
pub mod sequences;
pub mod special;
pub mod stats;

pub use error::{AnalysisError, BrownianError, CantorError, EventsError, SequenceError};
