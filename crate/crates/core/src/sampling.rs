//! Seeded uniform draws.
//!
//! The generator is SplitMix64 (Steele, Lea & Flood 2014) with its state set to
//! the seed. Each draw takes one 64-bit output `w` and maps it to
//! `lo + (hi − lo)·u` with `u = (w >> 11)·2⁻⁵³ ∈ [0, 1)`. The mapping is spelled
//! out here so that any implementation of SplitMix64 reproduces the same stream.

use rand_xoshiro::rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Debug, Clone)]
pub struct UniformStream {
    rng: SplitMix64,
}

impl UniformStream {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: SplitMix64::seed_from_u64(seed),
        }
    }

    /// Next value in `[0, 1)`.
    pub fn unit(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Next value in `[lo, hi)`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.unit()
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }
}
