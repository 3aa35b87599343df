//! Deterministic seed derivation.
//!
//! Every random stream in a simulation is a [`ChaCha8Rng`] derived from a
//! master seed and a path of tags, so that a stream depends only on *which*
//! run, player or replay it belongs to and never on scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const RUN_DOMAIN: u64 = 0x5255_4e00;
const ENV_DOMAIN: u64 = 0x454e_5600;
const ORACLE_DOMAIN: u64 = 0x4f52_4300;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Mixes a seed with a sequence of tags.
pub fn derive_seed(seed: u64, tags: &[u64]) -> u64 {
    tags.iter().fold(splitmix64(seed), |acc, &tag| {
        splitmix64(acc ^ splitmix64(tag))
    })
}

/// Seed of the `index`-th independent run under `master`.
pub fn run_seed(master: u64, index: u64) -> u64 {
    derive_seed(master, &[RUN_DOMAIN, index])
}

/// Seed handed to the environment's `reset` within one run.
pub fn environment_seed(run_seed: u64) -> u64 {
    derive_seed(run_seed, &[ENV_DOMAIN])
}

/// Seed of the `index`-th oracle replay under `master`.
pub fn oracle_seed(master: u64, index: u64) -> u64 {
    derive_seed(master, &[ORACLE_DOMAIN, index])
}

/// Sampling stream of one player within a run.
pub fn player_stream(run_seed: u64, player: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(run_seed);
    rng.set_stream(1 + player as u64);
    rng
}
