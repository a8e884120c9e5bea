//! Seeded random streams.
//!
//! A run is identified by `(base_seed, run_index)`. Its seed is
//! `splitmix64(splitmix64(base_seed) + run_index)`, and two ChaCha8 streams are
//! cut from that seed: stream 0 drives action selection, stream 1 belongs to the
//! environment. Each stochastic call site consumes draws in a fixed order, so a
//! run is bit-reproducible and independent of how runs are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

pub const AGENT_STREAM: u64 = 0;
pub const ENV_STREAM: u64 = 1;

/// SplitMix64 finaliser.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(base_seed: u64, run_index: u64) -> u64 {
    splitmix64(splitmix64(base_seed).wrapping_add(run_index))
}

pub fn stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn agent_rng(seed: u64) -> StreamRng {
    stream(seed, AGENT_STREAM)
}

pub fn env_rng(seed: u64) -> StreamRng {
    stream(seed, ENV_STREAM)
}
