//! Counter-based randomness. Every random decision is a pure function of
//! `(seed, iteration, phase, vertex, color)`, so results do not depend on
//! evaluation order or thread count.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Which kind of decision a draw feeds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Phase {
    Activation = 1,
    Equalizer = 2,
    MonteCarlo = 3,
    Finisher = 4,
    Generator = 5,
}

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

#[inline]
fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KeyedRng {
    seed: u64,
}

impl KeyedRng {
    pub fn new(seed: u64) -> Self {
        Self { seed }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// 64 uniformly distributed bits for the given key.
    #[inline]
    pub fn bits(&self, iteration: u64, phase: Phase, vertex: u64, color: u64) -> u64 {
        let mut h = mix(self.seed.wrapping_add(GOLDEN));
        for word in [iteration, phase as u64, vertex, color] {
            h = mix(h ^ word
                .wrapping_add(GOLDEN)
                .wrapping_add(h << 6)
                .wrapping_add(h >> 2));
        }
        h
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    #[inline]
    pub fn uniform(&self, iteration: u64, phase: Phase, vertex: u64, color: u64) -> f64 {
        (self.bits(iteration, phase, vertex, color) >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `true` with probability `p` (clamped to `[0, 1]`).
    #[inline]
    pub fn bernoulli(&self, p: f64, iteration: u64, phase: Phase, vertex: u64, color: u64) -> bool {
        self.uniform(iteration, phase, vertex, color) < p
    }

    /// A sequential generator for draws that need a stream, seeded by the key.
    pub fn stream(&self, iteration: u64, phase: Phase, vertex: u64, color: u64) -> ChaCha8Rng {
        let a = self.bits(iteration, phase, vertex, color);
        let b = mix(a ^ GOLDEN);
        let mut seed = [0u8; 32];
        seed[..8].copy_from_slice(&a.to_le_bytes());
        seed[8..16].copy_from_slice(&b.to_le_bytes());
        seed[16..24].copy_from_slice(&mix(b).to_le_bytes());
        seed[24..].copy_from_slice(&mix(mix(b)).to_le_bytes());
        ChaCha8Rng::from_seed(seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_key_sensitive() {
        let r = KeyedRng::new(7);
        assert_eq!(
            r.bits(1, Phase::Activation, 2, 3),
            r.bits(1, Phase::Activation, 2, 3)
        );
        let base = r.bits(1, Phase::Activation, 2, 3);
        assert_ne!(base, r.bits(2, Phase::Activation, 2, 3));
        assert_ne!(base, r.bits(1, Phase::Equalizer, 2, 3));
        assert_ne!(base, r.bits(1, Phase::Activation, 3, 3));
        assert_ne!(base, r.bits(1, Phase::Activation, 2, 4));
        assert_ne!(base, r.bits(1, Phase::Activation, 3, 2));
        assert_ne!(base, KeyedRng::new(8).bits(1, Phase::Activation, 2, 3));
    }

    #[test]
    fn bernoulli_frequency() {
        let r = KeyedRng::new(42);
        let n = 200_000u64;
        let hits = (0..n)
            .filter(|&i| r.bernoulli(0.3, 0, Phase::Activation, i, 0))
            .count() as f64;
        let freq = hits / n as f64;
        // 5 standard deviations
        assert!(
            (freq - 0.3).abs() < 5.0 * (0.21f64 / n as f64).sqrt(),
            "{freq}"
        );
    }

    #[test]
    fn uniform_in_unit_interval() {
        let r = KeyedRng::new(0);
        for i in 0..10_000 {
            let u = r.uniform(i, Phase::MonteCarlo, i * 3, 1);
            assert!((0.0..1.0).contains(&u));
        }
    }
}
