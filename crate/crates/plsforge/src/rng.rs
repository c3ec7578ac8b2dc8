//! Seed expansion. Every random choice in the crate is drawn from a ChaCha8
//! stream selected by `(seed, key)`, so any run can be replayed from its seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent generator for `(seed, key)`; different keys give unrelated streams.
pub fn stream(seed: u64, key: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(key);
    rng
}

/// Domain keys so unrelated consumers of one seed never share a stream.
pub mod keys {
    pub const GENERATE: u64 = 0x67656e;
    pub const PADDED: u64 = 0x706164;
    pub const FUZZ: u64 = 0x66757a;
    pub const INSTANCE: u64 = 0x696e73;
}
