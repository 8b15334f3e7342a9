//! Reproducible randomness.
//!
//! Every random decision in the crate (split shuffles, bootstrap samples,
//! feature subsets, weight initialisation, epoch shuffles) is driven by
//! SplitMix64 (Steele, Lea & Flood 2014): state += 0x9E3779B97F4A7C15, output
//! mixed with the multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB.
//! The generator is seeded with the raw 64-bit seed as its state. On top of
//! the raw stream this module fixes the derived samplers so that results are
//! reproducible by any implementation:
//!
//! * `below(n)`: draw `x`, reject while `x >= 2^64 - (2^64 mod n)`, return `x % n`.
//! * `unit_f64()`: `(x >> 11) * 2^-53`, uniform on `[0, 1)`.
//! * `shuffle`: Fisher–Yates from the last index down, `j = below(i + 1)`.
//! * `split()`: a child generator seeded with the parent's next output.

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

#[derive(Debug, Clone)]
pub struct SeededRng {
    inner: SplitMix64,
}

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng { inner: SplitMix64::seed_from_u64(seed) }
    }

    /// Child stream for a labelled sub-task, independent of call order.
    pub fn derive(seed: u64, stream: u64) -> Self {
        let mut mix = SplitMix64::seed_from_u64(seed ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03));
        SeededRng::new(mix.next_u64())
    }

    pub fn split(&mut self) -> Self {
        SeededRng::new(self.next_u64())
    }

    pub fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        assert!(n > 0, "below(0)");
        let n = n as u64;
        let zone = u64::MAX - (u64::MAX % n);
        // `zone` is a multiple of n (2^64 - 1 - r = q n), so x % n is unbiased below it.
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    pub fn unit_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform real in `[-bound, bound)`.
    pub fn symmetric(&mut self, bound: f64) -> f64 {
        (2.0 * self.unit_f64() - 1.0) * bound
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }

    /// `k` distinct indices from `[0, n)` via a partial Fisher–Yates pass.
    pub fn sample_indices(&mut self, n: usize, k: usize) -> Vec<usize> {
        let k = k.min(n);
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}
