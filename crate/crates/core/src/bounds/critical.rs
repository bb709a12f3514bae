use std::f64::consts::{E, PI};

use serde::Serialize;

use super::rates::{lower_bound_derivative_terms, rate_lower_bound, wideband_limit};
use crate::error::{Error, Result};
use crate::optimize::{bisect, golden_section_max};
use crate::scenario::ChannelScenario;

/// Where the lower bound peaks.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OptimalOccupancy {
    /// Closed-form approximation `(P/(N0·Nt))·√(Lc/ln Lc·(κ−2+Nt+Nr))`.
    pub occupancy_optimal: f64,
    /// Numerical maximizer of the lower bound.
    pub occupancy_optimal_exact: f64,
    /// `C∞[1 − √(ln Lc/Lc·(κ−2+Nt+Nr)·ln π)]`
    pub peak_rate_lower: f64,
    /// `1 − peak_rate_lower/C∞`
    pub gap_delta: f64,
    /// |Σ derivative terms| / max |term| at the exact maximizer.
    pub stationarity_residual: f64,
}

/// Optimal occupancy plus the bracket `[(δB)⁻, (δB)⁺]` that contains it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CriticalBracket {
    pub occupancy_optimal: f64,
    pub occupancy_optimal_exact: f64,
    pub occupancy_low: f64,
    pub occupancy_high: f64,
    pub occupancy_low_exact: f64,
    pub occupancy_high_exact: f64,
    pub peak_rate_lower: f64,
    pub gap_delta: f64,
}

/// Approximate and exact maximizers of the lower bound. Requires `Lc > e`.
///
/// The exact maximizer is found by golden-section search on `ln δB` over
/// `[(δB)*/100, 100·(δB)*]` and then refined by bisection on the analytic
/// derivative, since a value-based search cannot resolve the flat top
/// beyond roughly `√ε` relative.
pub fn optimal_occupancy(scenario: &ChannelScenario) -> Result<OptimalOccupancy> {
    let lc = scenario.coherence_product();
    if !(lc > E) {
        return Err(Error::domain(format!("optimal occupancy needs Lc > e, got Lc = {lc}")));
    }
    let p = scenario.snr_density();
    let nt = scenario.nt() as f64;
    let a = scenario.antenna_factor();
    let approx = p / nt * (lc / lc.ln() * a).sqrt();

    let f = |u: f64| rate_lower_bound(scenario, u.exp()).unwrap_or(f64::NEG_INFINITY);
    let u0 = golden_section_max(f, (approx / 100.0).ln(), (approx * 100.0).ln(), 1e-9);
    let x0 = u0.exp();

    let deriv = |x: f64| lower_bound_derivative_terms(scenario, x).iter().sum::<f64>();
    let (mut lo, mut hi) = (x0, x0);
    let mut step = 1.0 + 1e-6;
    while deriv(lo) < 0.0 && lo > approx * 1e-4 {
        lo /= step;
        step *= 2.0;
    }
    step = 1.0 + 1e-6;
    while deriv(hi) > 0.0 && hi < approx * 1e4 {
        hi *= step;
        step *= 2.0;
    }
    let exact = bisect(deriv, lo, hi, 200).unwrap_or(x0);

    let terms = lower_bound_derivative_terms(scenario, exact);
    let scale = terms.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let residual = terms.iter().sum::<f64>().abs() / scale;

    let gap = (lc.ln() / lc * a * PI.ln()).sqrt();
    Ok(OptimalOccupancy {
        occupancy_optimal: approx,
        occupancy_optimal_exact: exact,
        peak_rate_lower: wideband_limit(scenario) * (1.0 - gap),
        gap_delta: gap,
        stationarity_residual: residual,
    })
}

/// Both ends of the critical bracket for `P/N0·√(Lc/ln Lc) = scale`.
/// Returns `(low_approx, low_exact, high_exact, high_approx)`.
fn bracket_ends(nt: usize, nr: usize, scale: f64) -> (f64, f64, f64, f64) {
    let ntf = nt as f64;
    let sum = (nt + nr) as f64;
    let ln_pi = PI.ln();
    let low = scale / (2.0 * (sum * ln_pi).sqrt());
    let high = scale * 2.0 * (sum * ln_pi).sqrt() / ntf;
    // roots of the quadratic in √Υ, Ω = Nt·Υ
    let a = ((nr as f64 / ntf + 1.0) * ln_pi).sqrt();
    let d = (a * a - 1.0).sqrt();
    let low_exact = scale / (ntf.sqrt() * (a + d));
    let high_exact = scale / (ntf.sqrt() * (a - d));
    (low, low_exact, high_exact, high)
}

/// Rayleigh only; requires `Lc ≥ π^(4/(Nt+Nr))` and `Lc > e`.
pub fn critical_bracket(scenario: &ChannelScenario) -> Result<CriticalBracket> {
    if !scenario.fading().is_rayleigh() {
        return Err(Error::UnsupportedFading(scenario.fading().to_string()));
    }
    let lc = scenario.coherence_product();
    let threshold = PI.powf(4.0 / (scenario.nt() + scenario.nr()) as f64);
    if lc < threshold {
        return Err(Error::domain(format!(
            "critical bracket needs Lc ≥ π^(4/(Nt+Nr)) = {threshold}, got Lc = {lc}"
        )));
    }
    let opt = optimal_occupancy(scenario)?;
    let scale = scenario.snr_density() * (lc / lc.ln()).sqrt();
    let (low, low_exact, high_exact, high) = bracket_ends(scenario.nt(), scenario.nr(), scale);
    let b = CriticalBracket {
        occupancy_optimal: opt.occupancy_optimal,
        occupancy_optimal_exact: opt.occupancy_optimal_exact,
        occupancy_low: low,
        occupancy_high: high,
        occupancy_low_exact: low_exact,
        occupancy_high_exact: high_exact,
        peak_rate_lower: opt.peak_rate_lower,
        gap_delta: opt.gap_delta,
    };
    if !(b.occupancy_low <= b.occupancy_optimal && b.occupancy_optimal <= b.occupancy_high) {
        return Err(Error::domain(format!(
            "(δB)* = {} outside [{}, {}]",
            b.occupancy_optimal, b.occupancy_low, b.occupancy_high
        )));
    }
    Ok(b)
}

/// One point of the normalized (`P/N0·√(Lc/ln Lc) = 1`) bracket surfaces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fig6Row {
    pub nt: usize,
    pub nr: usize,
    pub b_low_exact: f64,
    pub b_low_approx: f64,
    pub b_high_exact: f64,
    pub b_high_approx: f64,
}

impl Fig6Row {
    /// Exact roots lie inside the approximate bracket.
    pub fn is_contained(&self) -> bool {
        self.b_low_approx <= self.b_low_exact && self.b_high_exact <= self.b_high_approx
    }
}

pub fn fig6_row(nt: usize, nr: usize) -> Fig6Row {
    let (lo, lo_x, hi_x, hi) = bracket_ends(nt, nr, 1.0);
    Fig6Row {
        nt,
        nr,
        b_low_exact: lo_x,
        b_low_approx: lo,
        b_high_exact: hi_x,
        b_high_approx: hi,
    }
}
