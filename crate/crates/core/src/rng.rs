//! Random-number contract.
//!
//! Generator: ChaCha8 (`rand_chacha` 0.3), seeded through
//! `SeedableRng::seed_from_u64`. Generator version tag: [`RNG_VERSION`].
//!
//! Stream splitting: every random phase of a run draws from its own ChaCha
//! stream of the same key. For a master seed `m`:
//!
//! - stream `0` splits the host into bulk and reservoir;
//! - stream `s` (1-based) drives the greedy embedding of guest `s`.
//!
//! Experiment trials derive their master seed as `mix64(master ^ mix64(i))`
//! where `mix64` is the SplitMix64 finalizer.
//!
//! Uniform choices from a set of size `k` consume exactly one `u64` `x` and
//! return `floor(x * k / 2^64)`, so every step consumes a fixed amount of
//! randomness.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type PackRng = ChaCha8Rng;

pub const RNG_VERSION: &str = "chacha8-rand_chacha0.3/seed_from_u64/v1";

/// Stream used for the bulk/reservoir split.
pub const SPLIT_STREAM: u64 = 0;

pub fn stream_rng(master_seed: u64, stream: u64) -> PackRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(stream);
    rng
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` under `master_seed`.
pub fn trial_seed(master_seed: u64, index: u64) -> u64 {
    mix64(master_seed ^ mix64(index))
}

/// Derives an independent seed for a named sub-purpose of a trial.
pub fn derive_seed(seed: u64, label: u64) -> u64 {
    mix64(seed.wrapping_add(mix64(label ^ 0xA5A5_A5A5_A5A5_A5A5)))
}

/// Uniform index in `0..len` from exactly one `u64`. `len` must be positive.
#[inline]
pub fn uniform_index<R: RngCore + ?Sized>(rng: &mut R, len: usize) -> usize {
    debug_assert!(len > 0);
    ((rng.next_u64() as u128 * len as u128) >> 64) as usize
}
