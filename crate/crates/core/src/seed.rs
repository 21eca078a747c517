//! Seed derivation.
//!
//! Every random object in a simulation (interleavers, data bits, channel
//! noise) draws from its own generator whose seed is derived from the master
//! seed, a role tag and one or more indices. Generators never share state, so
//! work units can run in any order or in parallel and still reproduce the
//! same numbers.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Role tags mixed into derived seeds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Role {
    Interleaver1 = 0x1111,
    Interleaver2 = 0x2222,
    Data = 0xDA7A,
    Noise = 0x5E5E,
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives a seed from a base seed, a role and a list of indices.
pub fn derive(base: u64, role: Role, indices: &[u64]) -> u64 {
    indices
        .iter()
        .fold(mix64(base ^ mix64(role as u64)), |acc, &i| {
            mix64(acc ^ mix64(i))
        })
}

/// ChaCha8 generator keyed by `(base, role, indices)`.
pub fn rng(base: u64, role: Role, indices: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive(base, role, indices))
}
