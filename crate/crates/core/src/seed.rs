//! Seed derivation. Every random draw in the crate comes from a ChaCha stream
//! keyed by a base seed plus a purpose tag and an index, so independent parts
//! of a run never share a stream.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub(crate) const TOPOLOGY: u64 = 1;
pub(crate) const BANDWIDTH: u64 = 2;
pub(crate) const PERTURB: u64 = 3;
pub(crate) const PRIORITIES: u64 = 4;
pub(crate) const PSO_INIT: u64 = 5;
pub(crate) const PSO_STEP: u64 = 6;
pub(crate) const GA_INIT: u64 = 7;
pub(crate) const GA_GENERATION: u64 = 8;
pub(crate) const SELECTION: u64 = 9;
pub(crate) const TRIAL: u64 = 10;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes `seed` with a purpose tag and an index into a new 64-bit seed.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(tag)) ^ index)
}

pub(crate) fn rng(seed: u64, tag: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, tag, index))
}
