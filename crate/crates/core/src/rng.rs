//! The one random number generator used throughout the crate.
//!
//! All randomness (random seed sets, Louvain visiting order, random
//! baseline partitions) comes from ChaCha with 8 rounds, seeded through
//! `SeedableRng::seed_from_u64`. ChaCha output is defined by its algorithm
//! rather than by the host, so a given `u64` seed yields the same stream on
//! every platform.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

pub fn seeded(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
