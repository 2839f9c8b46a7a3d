//! Named random sub-streams derived from one top-level seed.
//!
//! Each component (trace synthesis, radio, controller jitter, refinement)
//! draws from its own ChaCha stream so changing how much randomness one
//! component consumes leaves the others untouched.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const TRACE: &str = "trace";
pub const RADIO: &str = "radio";
pub const CONTROLLER: &str = "controller";
pub const REFINEMENT: &str = "refinement";

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for b in bytes {
        hash ^= u64::from(*b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// SplitMix64 finalizer. Spreads the poorly mixed low bits of [`fnv1a`]
/// for near-identical inputs such as `v0001`, `v0002`.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Deterministic generator for the sub-stream `name` of `seed`.
pub fn stream(seed: u64, name: &str) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(fnv1a(name.as_bytes()));
    rng
}
