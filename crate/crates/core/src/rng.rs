//! Seeded random streams.
//!
//! Every randomized operation takes an explicit 64-bit seed and draws from
//! SplitMix64, a counter-based generator: the state advances by the fixed
//! odd constant `0x9e3779b97f4a7c15` and each output is a bijective mix of
//! the counter. Independent streams for trials, rounds or restarts are
//! derived as `seed + index` (wrapping), so any replica can be reproduced in
//! isolation.

use rand::SeedableRng;
pub use rand_xoshiro::SplitMix64 as StreamRng;

/// Generator for `seed` itself.
pub fn stream(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}

/// Seed of the `index`-th derived stream.
pub fn derive(seed: u64, index: u64) -> u64 {
    seed.wrapping_add(index)
}

/// Generator for the `index`-th derived stream.
pub fn substream(seed: u64, index: u64) -> StreamRng {
    stream(derive(seed, index))
}
