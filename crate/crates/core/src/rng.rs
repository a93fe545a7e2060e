//! Seeded, platform-stable randomness.
//!
//! Every random object in the crate is drawn from [`SeededRng`], a ChaCha8
//! stream keyed by a 64-bit seed. Experiments derive one independent stream
//! per trial with [`trial_seed`], so results do not depend on scheduling.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the `trial`-th stream of an experiment seeded with `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ mix64(trial)
}

/// Uniform random permutation of `0..n`, as a label vector.
pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
