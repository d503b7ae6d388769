//! Seeded random streams. Every consumer asks for its own stream id, so
//! adding draws in one place never shifts the numbers seen elsewhere.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const STREAM_FOLDS: u64 = 1;
pub const STREAM_INDEFINITENESS: u64 = 2;
pub const STREAM_SYNTHETIC: u64 = 3;

/// ChaCha8 keyed by `seed`, positioned on stream `stream`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Child stream for the `index`-th independent trial of a consumer. Trial
/// streams live above `2^32` and never collide with the plain ones.
pub fn trial_rng(seed: u64, stream: u64, index: u32) -> ChaCha8Rng {
    stream_rng(seed, (stream << 32) | u64::from(index))
}
