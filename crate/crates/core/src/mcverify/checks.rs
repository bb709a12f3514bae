use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{estimate, run_trials, McConfig, McEstimate};
use crate::bounds::{rate_lower_bound, rate_upper_bound, wideband_limit};
use crate::channel::{dense_gram_eigenvalues, draw_tap, PilotCirculant};
use crate::error::{Error, Result};
use crate::linalg::{gram_outer, hermitian_eigenvalues, log_det_identity_plus, C64};
use crate::scenario::{ChannelScenario, FadingFamily};

/// Smallest trial count accepted by the statistical checks.
pub const MIN_TRIALS: usize = 10_000;

fn draw_matrix<R: Rng + ?Sized>(fading: &FadingFamily, nr: usize, nt: usize, rng: &mut R) -> DMatrix<C64> {
    let mut h = DMatrix::zeros(nr, nt);
    for v in 0..nr {
        for u in 0..nt {
            h[(v, u)] = draw_tap(fading, 1.0, rng);
        }
    }
    h
}

/// Estimate of `E|h|⁴` for unit-power coefficients of `fading`, which is its kurtosis.
pub fn empirical_kurtosis(fading: &FadingFamily, cfg: &McConfig) -> Result<McEstimate> {
    let f = *fading;
    empirical_kurtosis_with(cfg, move |rng| draw_tap(&f, 1.0, rng))
}

/// Same estimator for an arbitrary sampler, which must have `E|h|² = 1`.
pub fn empirical_kurtosis_with<S>(cfg: &McConfig, sampler: S) -> Result<McEstimate>
where
    S: Fn(&mut ChaCha8Rng) -> C64 + Sync + Send,
{
    cfg.require(MIN_TRIALS)?;
    Ok(estimate(cfg, |rng| {
        let p = sampler(rng).norm_sqr();
        p * p
    }))
}

/// `Nt·Nr·(κ−2+Nt+Nr)`
pub fn trace_identity_target(scenario: &ChannelScenario) -> f64 {
    (scenario.nt() * scenario.nr()) as f64 * scenario.antenna_factor()
}

/// Estimate of `E tr((HHᴴ)²)` over i.i.d. unit-power coefficients.
pub fn trace_identity_check(scenario: &ChannelScenario, cfg: &McConfig) -> Result<McEstimate> {
    cfg.require(MIN_TRIALS)?;
    let (nt, nr, fading) = (scenario.nt(), scenario.nr(), scenario.fading());
    Ok(estimate(cfg, |rng| {
        let w = gram_outer(&draw_matrix(&fading, nr, nt, rng));
        w.iter().map(|z| z.norm_sqr()).sum()
    }))
}

/// `ln det(I + ρ·HHᴴ)`
pub fn coherent_log_det(h: &DMatrix<C64>, rho: f64) -> f64 {
    let w = gram_outer(h) * C64::new(rho, 0.0);
    log_det_identity_plus(&w).unwrap_or_else(|| hermitian_eigenvalues(&w).iter().map(|l| l.max(0.0).ln_1p()).sum())
}

/// `C∞[1 − P(κ−2+Nt+Nr)/(2δB·Nt·N0)]`, the second-order expansion of the coherent term.
pub fn coherent_quadratic_bound(scenario: &ChannelScenario, occupancy: f64) -> f64 {
    wideband_limit(scenario)
        * (1.0 - scenario.snr_density() * scenario.antenna_factor() / (2.0 * occupancy * scenario.nt() as f64))
}

fn snr_per_stream(scenario: &ChannelScenario, occupancy: f64) -> f64 {
    scenario.snr_density() / (occupancy * scenario.nt() as f64)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {v}")))
    }
}

/// Estimate of `δB·E ln det(I + ρHHᴴ)` in nats/s, `ρ = P/(δB·Nt·N0)`.
pub fn coherent_term_mc(scenario: &ChannelScenario, occupancy: f64, cfg: &McConfig) -> Result<McEstimate> {
    cfg.require(MIN_TRIALS)?;
    check_positive("occupancy", occupancy)?;
    let rho = snr_per_stream(scenario, occupancy);
    let (nt, nr, fading) = (scenario.nt(), scenario.nr(), scenario.fading());
    Ok(estimate(cfg, |rng| coherent_log_det(&draw_matrix(&fading, nr, nt, rng), rho)).scaled(occupancy))
}

/// Estimate of `ρ·tr W − ln det(I + ρW)` per channel use, `W = HHᴴ`.
/// This is the part of the coherent term beyond its linear approximation.
pub fn coherent_deficit_mc(scenario: &ChannelScenario, rho: f64, cfg: &McConfig) -> Result<McEstimate> {
    cfg.require(MIN_TRIALS)?;
    let (nt, nr, fading) = (scenario.nt(), scenario.nr(), scenario.fading());
    Ok(estimate(cfg, |rng| {
        let h = draw_matrix(&fading, nr, nt, rng);
        let tr: f64 = h.iter().map(|z| z.norm_sqr()).sum();
        rho * tr - coherent_log_det(&h, rho)
    }))
}

/// `ln det(I + ρ·Λ^½ G Λ^½)` with `G = ΞᴴΞ` and `Λ = diag(gains)`.
pub fn penalty_log_det(gram: &DMatrix<C64>, gains: &[f64], rho: f64) -> f64 {
    let n = gram.nrows();
    let s: Vec<f64> = gains.iter().map(|g| g.sqrt()).collect();
    let a = DMatrix::from_fn(n, n, |i, j| gram[(i, j)] * (rho * s[i] * s[j]));
    log_det_identity_plus(&a).unwrap_or_else(|| hermitian_eigenvalues(&a).iter().map(|l| l.max(0.0).ln_1p()).sum())
}

/// Closed-form cap on the penalty term, `(δB·Nr·Nt/Lc)·ln(1 + P·Lc/(δB·N0·Nt))`.
pub fn penalty_cap(scenario: &ChannelScenario, occupancy: f64) -> f64 {
    penalty_cap_at(scenario, occupancy, scenario.coherence_product())
}

fn penalty_cap_at(scenario: &ChannelScenario, occupancy: f64, lc: f64) -> f64 {
    let rho = snr_per_stream(scenario, occupancy);
    occupancy * (scenario.nr() * scenario.nt()) as f64 / lc * (rho * lc).ln_1p()
}

/// Penalty-term estimate with both ends of its bounding chain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PenaltySandwich {
    pub estimate: McEstimate,
    /// `(δB·Nr·Nt/Lc)·E ln(1 + ρ·Lc·g_min·ψ)`, estimated on the same trials.
    pub lower_chain: McEstimate,
    /// The AM–GM cap.
    pub upper_chain: f64,
    pub k_samples: usize,
    pub m_taps: usize,
    pub coherence_length: usize,
}

impl PenaltySandwich {
    pub fn lower_ok(&self) -> bool {
        self.lower_chain.mean <= self.estimate.mean + super::SIGMA_RULE * self.estimate.std_error
    }

    pub fn upper_ok(&self) -> bool {
        self.estimate.at_most(self.upper_chain)
    }

    pub fn pass(&self) -> bool {
        self.lower_ok() && self.upper_ok()
    }
}

/// `(δB/K)·Nr·E ln det(I + ρ·Λ^½ΞᴴΞΛ^½)` for Rayleigh taps with the uniform
/// profile and Gaussian pilots renormalized to unit power.
///
/// `Lc` is the scenario's integer coherence length and `M = K/Lc`; the pilot
/// has `M·Nt` columns. The lower chain uses `ψ` from the dense spectrum of
/// `ΞᴴΞ` and `g_min = min(1, min |h|²)` over one tap draw per trial.
pub fn penalty_sandwich(
    scenario: &ChannelScenario,
    occupancy: f64,
    k_samples: usize,
    cfg: &McConfig,
) -> Result<PenaltySandwich> {
    cfg.require(MIN_TRIALS)?;
    check_positive("occupancy", occupancy)?;
    if !scenario.fading().is_rayleigh() {
        return Err(Error::UnsupportedFading(scenario.fading().to_string()));
    }
    let lc = scenario.coherence_length();
    if k_samples == 0 || k_samples % lc != 0 {
        return Err(Error::Dimension(format!(
            "K = {k_samples} is not a positive multiple of Lc = {lc}"
        )));
    }
    let m = k_samples / lc;
    let (nt, nr) = (scenario.nt(), scenario.nr());
    let cols = m * nt;
    if cols > k_samples {
        return Err(Error::Dimension(format!("M·Nt = {cols} exceeds K = {k_samples}")));
    }
    let rho = snr_per_stream(scenario, occupancy);
    let gains = vec![1.0 / m as f64; cols];
    let lcf = lc as f64;

    let samples = run_trials(cfg, |rng| {
        let pilot = PilotCirculant::gaussian(k_samples, cols, rng).expect("gaussian pilot is non-zero");
        let gram = pilot.gram();
        let ld = penalty_log_det(&gram, &gains, rho);
        let psi = dense_gram_eigenvalues(&pilot)[0].max(0.0) / k_samples as f64;
        let g_min = (0..nr * nt * m)
            .map(|_| draw_tap(&FadingFamily::Rayleigh, 1.0 / m as f64, rng).norm_sqr())
            .fold(f64::INFINITY, f64::min)
            .min(1.0);
        (ld, (rho * lcf * g_min * psi).ln_1p())
    });
    let (ld, low): (Vec<f64>, Vec<f64>) = samples.into_iter().unzip();
    let prefactor = occupancy * nr as f64 / k_samples as f64;
    Ok(PenaltySandwich {
        estimate: McEstimate::from_samples(&ld).scaled(prefactor),
        lower_chain: McEstimate::from_samples(&low).scaled(occupancy * (nr * nt) as f64 / lcf),
        upper_chain: penalty_cap_at(scenario, occupancy, lcf),
        k_samples,
        m_taps: m,
        coherence_length: lc,
    })
}

/// The penalty-term estimate alone.
pub fn penalty_term_mc(
    scenario: &ChannelScenario,
    occupancy: f64,
    k_samples: usize,
    cfg: &McConfig,
) -> Result<McEstimate> {
    Ok(penalty_sandwich(scenario, occupancy, k_samples, cfg)?.estimate)
}

/// One occupancy of [`bound_sandwich_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SandwichPoint {
    pub occupancy: f64,
    pub rate_lower: f64,
    /// Truncated closed-form upper bound with `penalty_factor = 1`.
    pub rate_upper: Option<f64>,
    /// `δB·Nr·ln(1 + P/(δB·N0))` minus the penalty cap: the upper end with the
    /// remainder that the truncated upper bound drops.
    pub upper_consistency: f64,
    pub coherent: McEstimate,
    pub penalty_cap: f64,
    /// coherent estimate minus the penalty cap
    pub mc_value: McEstimate,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl SandwichPoint {
    pub fn pass(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// For each occupancy, estimate the coherent term, subtract the penalty cap
/// and check the result against the lower bound (and the upper end).
pub fn bound_sandwich_sweep(scenario: &ChannelScenario, grid: &[f64], cfg: &McConfig) -> Result<Vec<SandwichPoint>> {
    if !scenario.fading().is_rayleigh() {
        return Err(Error::UnsupportedFading(scenario.fading().to_string()));
    }
    grid.iter()
        .enumerate()
        .map(|(i, &x)| {
            let coherent = coherent_term_mc(scenario, x, &cfg.reseeded(i as u64))?;
            let cap = penalty_cap(scenario, x);
            let mc_value = McEstimate {
                mean: coherent.mean - cap,
                ..coherent
            };
            let rate_lower = rate_lower_bound(scenario, x)?;
            let upper_consistency = x * scenario.nr() as f64 * (scenario.snr_density() / x).ln_1p() - cap;
            Ok(SandwichPoint {
                occupancy: x,
                rate_lower,
                rate_upper: Some(rate_upper_bound(scenario, x, 1.0)?),
                upper_consistency,
                coherent,
                penalty_cap: cap,
                mc_value,
                lower_ok: mc_value.at_least(rate_lower),
                upper_ok: mc_value.at_most(upper_consistency),
            })
        })
        .collect()
}
