//! Seeded random stream used by the generator.
//!
//! The stream is ChaCha8 seeded through `SeedableRng::seed_from_u64`. All
//! draws go through [`GenRng::unit`], which maps the top 53 bits of one
//! `u64` to `[0, 1)`, so another implementation can replay a family from
//! the seed alone.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Debug, Clone)]
pub struct GenRng {
    inner: ChaCha8Rng,
}

/// `floor(x + 0.5)`.
pub fn round_half_up(x: f64) -> f64 {
    (x + 0.5).floor()
}

impl GenRng {
    pub fn new(seed: u64) -> Self {
        Self { inner: ChaCha8Rng::seed_from_u64(seed) }
    }

    pub fn unit(&mut self) -> f64 {
        (self.inner.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Continuous uniform on `[low, high]`.
    pub fn uniform(&mut self, low: f64, high: f64) -> f64 {
        low + (high - low) * self.unit()
    }

    /// `round(Uniform(low, high))` with half-up rounding.
    pub fn rounded_uniform(&mut self, low: f64, high: f64) -> i64 {
        round_half_up(self.uniform(low, high)) as i64
    }

    /// Uniform integer in `0..bound`.
    pub fn below(&mut self, bound: usize) -> usize {
        ((self.unit() * bound as f64) as usize).min(bound - 1)
    }

    /// Fisher-Yates, swapping position `i` with a draw from `0..=i` for
    /// `i` running from the last index down to 1.
    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            let j = self.below(i + 1);
            items.swap(i, j);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = GenRng::new(42);
        let mut b = GenRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.unit().to_bits(), b.unit().to_bits());
        }
        let mut c = GenRng::new(43);
        let xs: Vec<u64> = (0..8).map(|_| a.unit().to_bits()).collect();
        let ys: Vec<u64> = (0..8).map(|_| c.unit().to_bits()).collect();
        assert_ne!(xs, ys);
    }

    #[test]
    fn ranges() {
        let mut rng = GenRng::new(7);
        for _ in 0..10_000 {
            let u = rng.unit();
            assert!((0.0..1.0).contains(&u));
            let q = rng.rounded_uniform(1.0, 9.0);
            assert!((1..=9).contains(&q));
            assert!(rng.below(5) < 5);
        }
        assert_eq!(round_half_up(6.5), 7.0);
        assert_eq!(round_half_up(9.75), 10.0);
        assert_eq!(round_half_up(16.25), 16.0);
    }

    #[test]
    fn shuffle_is_a_permutation() {
        let mut rng = GenRng::new(1);
        let mut v: Vec<u32> = (0..50).collect();
        rng.shuffle(&mut v);
        let mut sorted = v.clone();
        sorted.sort();
        assert_eq!(sorted, (0..50).collect::<Vec<_>>());
        assert_ne!(v, sorted);
    }
}
