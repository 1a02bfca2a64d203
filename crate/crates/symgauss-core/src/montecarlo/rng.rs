//! Deterministic random streams.
//!
//! Everything stochastic in this crate draws from [`Stream`], a ChaCha12
//! generator seeded from a single `u64`. ChaCha output is specified
//! byte-for-byte by the cipher, so a (seed, config) pair reproduces a run
//! bit-identically on any platform; the crate version pins the generator.

use rand_chacha::ChaCha12Rng;
use rand_core::{RngCore, SeedableRng};

use crate::fm;

/// 2^−53.
const U53: f64 = 1.0 / 9_007_199_254_740_992.0;

pub struct Stream {
    rng: ChaCha12Rng,
    spare_normal: Option<f64>,
}

impl Stream {
    pub fn new(seed: u64) -> Self {
        Stream {
            rng: ChaCha12Rng::seed_from_u64(seed),
            spare_normal: None,
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    /// Uniform on (0, 1]. The open left end keeps `ln` of the draw finite.
    pub fn uniform(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) + 1) as f64 * U53
    }

    /// Standard normal via Box–Muller; the paired draw is cached.
    pub fn normal(&mut self) -> f64 {
        if let Some(z) = self.spare_normal.take() {
            return z;
        }
        let r = fm::sqrt(-2.0 * fm::ln(self.uniform()));
        let phase = fm::TAU * self.uniform();
        self.spare_normal = Some(r * fm::sin(phase));
        r * fm::cos(phase)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Stream::new(17);
        let mut b = Stream::new(17);
        for _ in 0..100 {
            assert_eq!(a.next_u64(), b.next_u64());
        }
        let mut a = Stream::new(17);
        let mut b = Stream::new(17);
        for _ in 0..100 {
            assert_eq!(a.normal().to_bits(), b.normal().to_bits());
        }
    }

    #[test]
    fn different_seeds_diverge() {
        let mut a = Stream::new(1);
        let mut b = Stream::new(2);
        let same = (0..16).filter(|_| a.next_u64() == b.next_u64()).count();
        assert_eq!(same, 0);
    }

    #[test]
    fn uniform_is_in_half_open_unit_interval() {
        let mut s = Stream::new(99);
        for _ in 0..10_000 {
            let u = s.uniform();
            assert!(u > 0.0 && u <= 1.0);
        }
    }

    #[test]
    fn normal_moments_are_sane() {
        let mut s = Stream::new(5);
        let n = 200_000;
        let zs: Vec<f64> = (0..n).map(|_| s.normal()).collect();
        let mean = zs.iter().sum::<f64>() / n as f64;
        let var = zs.iter().map(|z| (z - mean) * (z - mean)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01, "mean {mean}");
        assert!((var - 1.0).abs() < 0.02, "var {var}");
    }
}
