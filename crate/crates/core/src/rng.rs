//! Deterministic random streams.
//!
//! Every user gets an independent ChaCha stream per protocol step, keyed by
//! `(seed, user, step)`. ChaCha is counter based, so a stream can be opened
//! in any order on any thread and still produce the same draws.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type StreamRng = ChaCha8Rng;

/// Protocol step that owns a random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u64)]
pub enum Step {
    /// Round-1 ARR perturbation of the neighbor list.
    Randomize = 0,
    /// Noisy degree and graph projection.
    EdgeClip = 1,
    /// Laplace noise on the round-2 statistic.
    Noise = 2,
    /// Bernoulli sampling on top of Warner RR (one-round ARR baseline).
    Sample = 3,
    /// 2-star estimator noise.
    Star = 4,
}

const STEP_BITS: u32 = 3;

/// Stream for `user` at `step` under the given seed.
pub fn user_stream(seed: u64, user: usize, step: Step) -> StreamRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((user as u64) << STEP_BITS) | step as u64);
    rng
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed for trial `trial` of an experiment with master seed `master`.
pub fn trial_seed(master: u64, trial: u64) -> u64 {
    mix64(master ^ mix64(trial.wrapping_add(0x6A09_E667_F3BC_C909)))
}
