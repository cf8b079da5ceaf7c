//! Seeding helpers.
//!
//! All randomness in this crate flows through explicitly seeded ChaCha12
//! generators, so every artifact (signal, matrix, noise draw) is bit-exactly
//! reproducible from a `u64` seed on any platform. Independent sub-streams
//! are derived with [`mix`], a SplitMix64 step: callers tag each consumer
//! (signal, matrix, folding noise, ...) with a distinct constant, and the
//! experiment harness layers the same rule over (point id, trial index).

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

/// Construct the deterministic generator used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

/// Derive an independent stream seed from `(seed, tag)`.
///
/// One SplitMix64 round over the sum; the constants are the reference
/// SplitMix64 multipliers. Distinct tags give statistically independent
/// streams, and the derivation is order-free: consumers may be evaluated in
/// any order without affecting each other's draws.
pub fn mix(seed: u64, tag: u64) -> u64 {
    let mut z = seed
        .wrapping_add(0x9E37_79B9_7F4A_7C15_u64.wrapping_mul(tag.wrapping_add(1)));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
