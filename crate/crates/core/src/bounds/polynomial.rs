//! Polynomial expansion `C∞(1 − c·SNR^α)` and the bracket on the exponent α.

use std::f64::consts::PI;

use serde::Serialize;

use super::rates::wideband_limit;
use crate::error::{Error, Result};
use crate::scenario::ChannelScenario;

fn check_snr(snr: f64) -> Result<()> {
    if snr > 0.0 && snr < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid("snr", format!("must lie in (0, 1), got {snr}")))
    }
}

/// Result of the sublinear bound together with the implied duty cycle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SublinearRate {
    pub rate: f64,
    /// `δ = SNR^(1−α)`
    pub delta: f64,
    /// `δB` exceeds the approximate optimal occupancy, outside the regime
    /// where the bound was derived. The rate is still returned.
    pub beyond_optimal: bool,
}

/// `C∞[1 − SNR^α·(κ−2+Nt+Nr)/Nt]` with `SNR = (P/N0)/B`.
pub fn sublinear_rate_bound(scenario: &ChannelScenario, bandwidth: f64, alpha: f64) -> Result<SublinearRate> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid("alpha", format!("must lie in (0, 1), got {alpha}")));
    }
    if !(bandwidth.is_finite() && bandwidth > 0.0) {
        return Err(Error::invalid(
            "bandwidth",
            format!("must be finite and > 0, got {bandwidth}"),
        ));
    }
    let snr = scenario.snr_density() / bandwidth;
    if snr >= 1.0 {
        return Err(Error::domain(format!("SNR = {snr} ≥ 1; the expansion needs SNR < 1")));
    }
    let nt = scenario.nt() as f64;
    let a = scenario.antenna_factor();
    let lc = scenario.coherence_product();
    let delta = snr.powf(1.0 - alpha);
    let star = scenario.snr_density() / nt * (lc / lc.ln() * a).sqrt();
    Ok(SublinearRate {
        rate: wideband_limit(scenario) * (1.0 - snr.powf(alpha) * a / nt),
        delta,
        beyond_optimal: delta * bandwidth > star,
    })
}

/// Estimates of the sublinear exponent for a given SNR and ε.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaBracket {
    pub alpha_max: f64,
    pub alpha_min: f64,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    pub epsilon: f64,
    /// Open interval `(0, ε)` of admissible σ.
    pub sigma_range: (f64, f64),
    pub snr: f64,
    /// Some raw value falls outside `(0, 1]`. Values are never clamped.
    pub clamped: bool,
}

/// `α_min = max(α_max − ε, α_max/2)`. Accepts `ε = 0`, in which case the
/// bracket collapses onto `α_max`; the flag reports that collapse.
pub fn alpha_min_for_epsilon(alpha_max: f64, epsilon: f64) -> Result<(f64, bool)> {
    if !(epsilon >= 0.0) {
        return Err(Error::invalid("epsilon", format!("must be >= 0, got {epsilon}")));
    }
    let v = (alpha_max - epsilon).max(alpha_max / 2.0);
    Ok((v, epsilon == 0.0))
}

/// α bracket from antenna counts and a coherence product directly.
pub fn alpha_brackets_for(
    nt: usize,
    nr: usize,
    coherence_product: f64,
    snr: f64,
    epsilon: f64,
) -> Result<AlphaBracket> {
    check_snr(snr)?;
    if !(epsilon > 0.0) {
        return Err(Error::invalid("epsilon", format!("must be > 0, got {epsilon}")));
    }
    if nt == 0 || nr == 0 {
        return Err(Error::invalid("antennas", "nt and nr must be >= 1"));
    }
    if !(coherence_product > 1.0) {
        return Err(Error::domain(format!(
            "coherence product ≤ 1 (Bc·Tc = {coherence_product})"
        )));
    }
    let ntf = nt as f64;
    let sum = (nt + nr) as f64;
    let lc = coherence_product;
    let l = 2.0 * (1.0 / snr).ln();
    let c = 4.0 * sum * PI.ln();
    let alpha_max = (sum * sum / (ntf * ntf) * lc).ln() / l;
    let (alpha_min, _) = alpha_min_for_epsilon(alpha_max, epsilon)?;
    let alpha_plus = (c / (ntf * ntf) * lc / lc.ln()).ln() / l;
    let alpha_minus = (lc / (c * lc.ln())).ln() / l;
    let clamped = [alpha_max, alpha_min, alpha_plus, alpha_minus]
        .iter()
        .any(|&a| !(a > 0.0 && a <= 1.0));
    Ok(AlphaBracket {
        alpha_max,
        alpha_min,
        alpha_plus,
        alpha_minus,
        epsilon,
        sigma_range: (0.0, epsilon),
        snr,
        clamped,
    })
}

pub fn alpha_brackets(scenario: &ChannelScenario, snr: f64, epsilon: f64) -> Result<AlphaBracket> {
    alpha_brackets_for(scenario.nt(), scenario.nr(), scenario.coherence_product(), snr, epsilon)
}

/// `ε(p) = ln(100/p)/ln(1/SNR)`: the exponent margin at which the neglected
/// term is `p` percent of the retained one.
pub fn epsilon_for_error_pct(p: f64, snr: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 100.0) {
        return Err(Error::invalid("p", format!("must lie in (0, 100], got {p}")));
    }
    check_snr(snr)?;
    Ok((100.0 / p).ln() / (1.0 / snr).ln())
}

/// Coherence product needed for exponent `α` with margin `σ`:
/// `Lc = Nt²/(Nt+Nr)²·SNR^(−2(σ+α))`.
pub fn coherence_requirement(alpha: f64, sigma: f64, snr: f64, nt: usize, nr: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::invalid("alpha", format!("must lie in (0, 1], got {alpha}")));
    }
    if !(sigma > 0.0) {
        return Err(Error::invalid("sigma", format!("must be > 0, got {sigma}")));
    }
    check_snr(snr)?;
    if nt == 0 || nr == 0 {
        return Err(Error::invalid("antennas", "nt and nr must be >= 1"));
    }
    let r = nt as f64 / (nt + nr) as f64;
    Ok(r * r * snr.powf(-2.0 * (sigma + alpha)))
}

/// Convert nats/symbol of the filter-bank model into nats/s (symbol rate `Bc`).
pub fn normalize_per_symbol_rate(rate_per_symbol: f64, scenario: &ChannelScenario) -> f64 {
    rate_per_symbol * scenario.coherence_bandwidth()
}
