//! Counter-based seed derivation for reproducible, schedule-independent
//! parallel Monte Carlo.
//!
//! Worker `w` of a run with master seed `s` draws from `stream(s, &[w])`;
//! trial `t` within that worker from `stream(s, &[w, t])`. Derivation is a
//! SplitMix64 chain, so sub-streams are decorrelated and independent of how
//! trials are scheduled onto threads.

use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

/// SplitMix64 mix of a base seed and a counter.
pub fn derive(base: u64, counter: u64) -> u64 {
    let mut z = base
        .wrapping_add(0x9e3779b97f4a7c15)
        .wrapping_add(counter.wrapping_mul(0xbf58476d1ce4e5b9));
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Seed value for the sub-stream identified by `ids` under `master`.
pub fn derive_chain(master: u64, ids: &[u64]) -> u64 {
    ids.iter().fold(master, |acc, &id| derive(acc, id))
}

/// Deterministic generator for the sub-stream identified by `ids`.
pub fn stream(master: u64, ids: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_chain(master, ids))
}
