//! Seed derivation.
//!
//! Every random draw of a run comes from a ChaCha8 stream whose seed is a
//! pure function of the master seed and a (domain, index) pair. Variants run
//! with the same master seed therefore share the landscape and the initial
//! population while their generational streams stay independent of one
//! another's consumption.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used everywhere in the crate.
pub type SimRng = ChaCha8Rng;

/// Stream domains. The numeric values are part of the reproducibility
/// contract and must not change.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u64)]
pub enum Stream {
    Landscape = 1,
    Init = 2,
    Reproduction = 3,
    Competition = 4,
    Replication = 5,
}

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derive a child seed from `master` for `stream` and `index`.
pub fn derive_seed(master: u64, stream: Stream, index: u64) -> u64 {
    let a = mix64(master.wrapping_add(GOLDEN));
    let b = mix64(a ^ (stream as u64).wrapping_mul(GOLDEN));
    mix64(b ^ index.wrapping_add(1).wrapping_mul(0xd6e8_feb8_6659_fd93))
}

pub fn stream(master: u64, stream: Stream, index: u64) -> SimRng {
    SimRng::seed_from_u64(derive_seed(master, stream, index))
}
