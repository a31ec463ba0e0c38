use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Independent deterministic stream `stream` derived from `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

// Stream ids, one per consumer of a user seed.
pub(crate) const STREAM_PARTITION: u64 = 1;
pub(crate) const STREAM_FOREST: u64 = 2;
pub(crate) const STREAM_SHUFFLE: u64 = 3;
pub(crate) const STREAM_INIT: u64 = 4;
pub(crate) const STREAM_GRAPH: u64 = 5;
pub(crate) const STREAM_PROBE: u64 = 6;
pub(crate) const STREAM_SAMPLES: u64 = 7;
