//! Random-number contract shared by every simulation path.
//!
//! Each replication owns one xoshiro256++ generator. Its seed is derived from
//! the master seed and the replication index by a pure SplitMix64 mix, so the
//! stream a replication sees does not depend on scheduling or worker count.

use rand::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::boundary::norm_quantile;

/// The one generator used for all simulation randomness.
pub type SimRng = Xoshiro256PlusPlus;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 output function (Steele, Lea & Flood). A bijection on `u64`.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for replication `rep_index` of a run with `master_seed`.
///
/// `splitmix64(master_seed ^ rep_index * GOLDEN_GAMMA)`. Multiplication by an
/// odd constant, xor with a fixed word and SplitMix64 are all bijections of
/// `u64`, so distinct indices under one master seed never collide.
pub fn replication_seed(master_seed: u64, rep_index: u64) -> u64 {
    splitmix64(master_seed ^ rep_index.wrapping_mul(GOLDEN_GAMMA))
}

/// Generator for one replication.
pub fn replication_rng(master_seed: u64, rep_index: u64) -> SimRng {
    SimRng::seed_from_u64(replication_seed(master_seed, rep_index))
}

/// Uniform draw on the open interval (0, 1) from the top 52 bits of one word.
///
/// `(m + 1/2) / 2^52` is exact for every 52-bit `m`, so neither endpoint is reachable.
pub fn open_unit(rng: &mut impl RngCore) -> f64 {
    ((rng.next_u64() >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Standard normal draw by inversion of one 64-bit uniform.
pub fn standard_normal(rng: &mut impl RngCore) -> f64 {
    norm_quantile(open_unit(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn replication_seed_is_pure() {
        assert_eq!(replication_seed(42, 0), replication_seed(42, 0));
        assert_eq!(replication_seed(u64::MAX, 7), replication_seed(u64::MAX, 7));
    }

    #[test]
    fn replication_seeds_do_not_collide_across_indices() {
        for master in [0u64, 1, 0xDEAD_BEEF, u64::MAX] {
            let seeds: HashSet<u64> = (0..100_000).map(|i| replication_seed(master, i)).collect();
            assert_eq!(seeds.len(), 100_000);
        }
    }

    #[test]
    fn replication_seeds_differ_across_masters() {
        let mut rng = SimRng::seed_from_u64(9);
        for _ in 0..10_000 {
            let a = rng.next_u64();
            let b = rng.next_u64();
            if a == b {
                continue;
            }
            let i = rng.next_u64() % 100_000;
            assert_ne!(replication_seed(a, i), replication_seed(b, i));
        }
    }

    #[test]
    fn open_unit_stays_inside() {
        struct Fixed(u64);
        impl RngCore for Fixed {
            fn next_u32(&mut self) -> u32 {
                self.0 as u32
            }
            fn next_u64(&mut self) -> u64 {
                self.0
            }
            fn fill_bytes(&mut self, _: &mut [u8]) {}
        }
        let lo = open_unit(&mut Fixed(0));
        let hi = open_unit(&mut Fixed(u64::MAX));
        assert!(lo > 0.0 && hi < 1.0);
        assert!(standard_normal(&mut Fixed(0)).is_finite());
        assert!(standard_normal(&mut Fixed(u64::MAX)).is_finite());
    }
}
