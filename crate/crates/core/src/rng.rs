//! Seeded random streams.
//!
//! Every stochastic routine takes an explicit generator. Ensembles derive one
//! ChaCha stream per replica from `(base_seed, replica_index)`, so replicas can
//! be produced in any order (or concurrently) with identical results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Stream = ChaCha8Rng;

/// Generator for a single, explicitly seeded computation.
pub fn seeded(seed: u64) -> Stream {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Disjoint substream `index` of the stream family keyed by `base_seed`.
pub fn substream(base_seed: u64, index: u64) -> Stream {
    let mut rng = ChaCha8Rng::seed_from_u64(base_seed);
    rng.set_stream(index);
    rng
}

/// A 64-bit seed identifying substream `index`; recorded in replica metadata.
pub fn replica_seed(base_seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser of the pair, only used as a label
    let mut z = base_seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
