//! Counter-based random streams.
//!
//! Every stream is addressed by a 64-bit key; the `i`-th output of a stream is
//! a pure function of `(key, i)`. Keys are derived by folding identifiers
//! (master seed, replicate index, segment id, ...) through the SplitMix64
//! finalizer, so replicates and nested refinements can be regenerated in any
//! order and on any thread.

use crate::special::norm_inv;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output finalizer (Stafford variant 13).
#[inline]
pub const fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a child key from a parent key and an identifier.
#[inline]
pub const fn derive(parent: u64, id: u64) -> u64 {
    mix64(parent ^ mix64(id.wrapping_add(1).wrapping_mul(GOLDEN_GAMMA)))
}

/// Per-replicate path seed: `mix64(master ^ mix64((r + 1)·γ))`.
#[inline]
pub const fn replicate_seed(master: u64, replicate: u64) -> u64 {
    derive(master, replicate)
}

/// A stream positioned at a counter.
#[derive(Clone, Debug)]
pub struct Stream {
    key: u64,
    counter: u64,
}

impl Stream {
    pub const fn new(key: u64) -> Self {
        Self { key, counter: 0 }
    }

    /// Sub-stream addressed by `id`, independent of this stream's position.
    pub const fn split(&self, id: u64) -> Self {
        Self::new(derive(self.key, id))
    }

    pub const fn key(&self) -> u64 {
        self.key
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(
            self.key
                .wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)),
        )
    }

    /// Uniform on the open interval (0, 1) with 53 bits of resolution.
    #[inline]
    pub fn next_open01(&mut self) -> f64 {
        ((self.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal by inversion.
    #[inline]
    pub fn next_normal(&mut self) -> f64 {
        norm_inv(self.next_open01())
    }
}
