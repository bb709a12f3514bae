//! Seeded, parallel Monte-Carlo checks of the proof steps behind the bounds.
//!
//! Trial `i` draws from its own `ChaCha8Rng` seeded with
//! `hash(base_seed, i)`. Per-trial values are collected in index order and
//! reduced with compensated summation, so an estimate depends only on
//! `(base_seed, trials)` and never on the thread count.

mod checks;
mod verify;

pub use checks::{
    bound_sandwich_sweep, coherent_deficit_mc, coherent_log_det, coherent_quadratic_bound, coherent_term_mc,
    empirical_kurtosis, empirical_kurtosis_with, penalty_cap, penalty_log_det, penalty_sandwich, penalty_term_mc,
    trace_identity_check, trace_identity_target, PenaltySandwich, SandwichPoint, MIN_TRIALS,
};
pub use verify::{run_verification, CheckRecord, VerificationReport, VerifyOptions};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Number of standard errors a statistical check may deviate.
pub const SIGMA_RULE: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct McConfig {
    pub trials: usize,
    pub base_seed: u64,
    /// Worker threads. Does not change results.
    pub parallel_width: usize,
}

impl McConfig {
    pub fn new(trials: usize, base_seed: u64) -> Self {
        McConfig {
            trials,
            base_seed,
            parallel_width: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }

    pub fn with_width(mut self, parallel_width: usize) -> Self {
        self.parallel_width = parallel_width.max(1);
        self
    }

    /// Same trials and width, different seed stream.
    pub fn reseeded(&self, salt: u64) -> Self {
        McConfig {
            base_seed: trial_seed(self.base_seed, salt ^ 0xA5A5_5A5A_0F0F_F0F0),
            ..*self
        }
    }

    fn require(&self, required: usize) -> Result<()> {
        if self.trials < required.max(1) {
            return Err(Error::InsufficientTrials {
                required: required.max(1),
                got: self.trials,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    /// sample standard deviation / √trials
    pub std_error: f64,
    pub trials: usize,
}

impl McEstimate {
    pub fn from_samples(samples: &[f64]) -> Self {
        let n = samples.len();
        let mean = neumaier_sum(samples.iter().copied()) / n as f64;
        let var = if n > 1 {
            neumaier_sum(samples.iter().map(|x| (x - mean) * (x - mean))) / (n - 1) as f64
        } else {
            0.0
        };
        McEstimate {
            mean,
            std_error: (var / n as f64).sqrt(),
            trials: n,
        }
    }

    /// `(mean − target)/std_error`; `0` when both the error and the deviation vanish.
    pub fn z_score(&self, target: f64) -> f64 {
        let d = self.mean - target;
        if d == 0.0 {
            0.0
        } else if self.std_error == 0.0 {
            d.signum() * f64::INFINITY
        } else {
            d / self.std_error
        }
    }

    pub fn agrees_with(&self, target: f64) -> bool {
        self.z_score(target).abs() <= SIGMA_RULE
    }

    /// `mean ≥ bound − 4σ`
    pub fn at_least(&self, bound: f64) -> bool {
        self.mean >= bound - SIGMA_RULE * self.std_error
    }

    /// `mean ≤ bound + 4σ`
    pub fn at_most(&self, bound: f64) -> bool {
        self.mean <= bound + SIGMA_RULE * self.std_error
    }

    pub fn scaled(&self, factor: f64) -> Self {
        McEstimate {
            mean: self.mean * factor,
            std_error: self.std_error * factor.abs(),
            trials: self.trials,
        }
    }
}

fn neumaier_sum<I: Iterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// SplitMix64 finalizer over the pair `(base_seed, index)`.
pub fn trial_seed(base_seed: u64, index: u64) -> u64 {
    let mut z = base_seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15).rotate_left(17);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Run `f` once per trial and return the results in trial order.
pub fn run_trials<T, F>(cfg: &McConfig, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync + Send,
{
    let work = || {
        (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(cfg.base_seed, i as u64));
                f(&mut rng)
            })
            .collect()
    };
    match rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallel_width.max(1))
        .build()
    {
        Ok(pool) => pool.install(work),
        Err(_) => work(),
    }
}

/// Mean and standard error of a scalar per-trial statistic.
pub fn estimate<F>(cfg: &McConfig, f: F) -> McEstimate
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync + Send,
{
    McEstimate::from_samples(&run_trials(cfg, f))
}
