use serde::Serialize;

use super::check_occupancy;
use crate::error::{Error, Result};
use crate::scenario::ChannelScenario;

/// `C∞ = Nr·P/N0`, the infinite-bandwidth AWGN capacity in nats/s.
pub fn wideband_limit(scenario: &ChannelScenario) -> f64 {
    scenario.nr() as f64 * scenario.snr_density()
}

/// Achievable rate with Gaussian signaling on a fraction of the band:
///
/// `C∞[1 − P(κ−2+Nt+Nr)/(2δB·Nt·N0)] − (δB·Nt·Nr/Lc)·ln(1 + P·Lc/(δB·Nt·N0))`
///
/// The first term is the coherent rate; the second is the price of learning
/// the channel. Negative values mean the bound is vacuous and are returned
/// unchanged.
pub fn rate_lower_bound(scenario: &ChannelScenario, occupancy: f64) -> Result<f64> {
    check_occupancy(occupancy)?;
    let p = scenario.snr_density();
    let nt = scenario.nt() as f64;
    let nr = scenario.nr() as f64;
    let lc = scenario.coherence_product();
    let coherent = wideband_limit(scenario) * (1.0 - p * scenario.antenna_factor() / (2.0 * occupancy * nt));
    let penalty = occupancy * nt * nr / lc * (p * lc / (occupancy * nt)).ln_1p();
    Ok(coherent - penalty)
}

/// Rayleigh-only converse with the `o(1/B)` remainder dropped:
///
/// `C∞[1 − P/(2δB·N0) − (δB·Nt·N0)/(P·Lc)·ln(1 + P·Lc·pf/(δB·Nt·N0))]`
///
/// `penalty_factor` stands for `g_min·ψ` (minimum tap gain times the pilot
/// eigenvalue ratio) and must lie in `(0, 1]`; `1` is the idealized case.
pub fn rate_upper_bound(scenario: &ChannelScenario, occupancy: f64, penalty_factor: f64) -> Result<f64> {
    if !scenario.fading().is_rayleigh() {
        return Err(Error::UnsupportedFading(scenario.fading().to_string()));
    }
    check_occupancy(occupancy)?;
    if !(penalty_factor > 0.0 && penalty_factor <= 1.0) {
        return Err(Error::invalid(
            "penalty_factor",
            format!("must lie in (0, 1], got {penalty_factor}"),
        ));
    }
    let p = scenario.snr_density();
    let nt = scenario.nt() as f64;
    let lc = scenario.coherence_product();
    let c = p * lc / (occupancy * nt);
    let bracket = 1.0 - p / (2.0 * occupancy) - (c * penalty_factor).ln_1p() / c;
    Ok(wideband_limit(scenario) * bracket)
}

/// The three terms of `d R^LB / d(δB)` (their sum is the derivative):
/// `[C∞·P·A/(2x²·Nt·N0), −C∞·(N0·Nt/(P·Lc))·ln(1 + c/x), C∞/(x(1 + c/x))]`
/// with `A = κ−2+Nt+Nr` and `c = P·Lc/(Nt·N0)`.
pub fn lower_bound_derivative_terms(scenario: &ChannelScenario, occupancy: f64) -> [f64; 3] {
    let p = scenario.snr_density();
    let nt = scenario.nt() as f64;
    let lc = scenario.coherence_product();
    let cinf = wideband_limit(scenario);
    let x = occupancy;
    let c = p * lc / nt;
    [
        cinf * p * scenario.antenna_factor() / (2.0 * x * x * nt),
        -cinf / c * (c / x).ln_1p(),
        cinf / (x * (1.0 + c / x)),
    ]
}

/// Bounds at one occupancy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsReport {
    pub occupancy: f64,
    pub rate_lower: f64,
    /// Present only for Rayleigh scenarios when requested.
    pub rate_upper: Option<f64>,
    pub wideband_limit: f64,
    /// `1 − rate_lower / wideband_limit`
    pub gap_delta: f64,
}

/// Evaluate the lower bound, and the upper bound when `penalty_factor` is given.
pub fn bounds_report(scenario: &ChannelScenario, occupancy: f64, penalty_factor: Option<f64>) -> Result<BoundsReport> {
    let rate_lower = rate_lower_bound(scenario, occupancy)?;
    let rate_upper = penalty_factor
        .map(|pf| rate_upper_bound(scenario, occupancy, pf))
        .transpose()?;
    let wideband_limit = wideband_limit(scenario);
    Ok(BoundsReport {
        occupancy,
        rate_lower,
        rate_upper,
        wideband_limit,
        gap_delta: 1.0 - rate_lower / wideband_limit,
    })
}
