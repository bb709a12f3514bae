//! Sweep grids and the row types behind the CLI tables.

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{
    alpha_brackets_for, alpha_min_for_epsilon, epsilon_for_error_pct, fig6_row, rate_lower_bound, rate_upper_bound,
    wideband_limit, Fig6Row,
};
use crate::error::{Error, Result};
use crate::scenario::ChannelScenario;

/// A strictly increasing set of sample points.
///
/// Text form: `log:<min>:<max>:<n>`, `lin:<min>:<max>:<n>`, or a
/// comma-separated list of values (a single value is a one-point grid).
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    Log { min: f64, max: f64, n: usize },
    Lin { min: f64, max: f64, n: usize },
    Points(Vec<f64>),
}

impl Grid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            Grid::Log { min, max, n } => {
                let (a, b) = (min.ln(), max.ln());
                (0..n)
                    .map(|i| match i {
                        0 => min,
                        i if i == n - 1 => max,
                        i => (a + (b - a) * i as f64 / (n - 1) as f64).exp(),
                    })
                    .collect()
            }
            Grid::Lin { min, max, n } => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        max
                    } else {
                        min + (max - min) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
            Grid::Points(ref v) => v.clone(),
        }
    }

    fn validate(self) -> Result<Self> {
        match self {
            Grid::Log { min, max, n } | Grid::Lin { min, max, n } => {
                if n < 2 {
                    return Err(Error::invalid("grid", format!("needs at least 2 points, got {n}")));
                }
                if !(min.is_finite() && max.is_finite() && min < max) {
                    return Err(Error::invalid(
                        "grid",
                        format!("needs finite min < max, got {min}..{max}"),
                    ));
                }
                if matches!(self, Grid::Log { .. }) && !(min > 0.0) {
                    return Err(Error::invalid("grid", "log spacing needs min > 0"));
                }
            }
            Grid::Points(ref v) => {
                if v.is_empty() {
                    return Err(Error::invalid("grid", "no points"));
                }
                if v.iter().any(|x| !x.is_finite()) || v.windows(2).any(|w| w[1] <= w[0]) {
                    return Err(Error::invalid("grid", "points must be finite and strictly increasing"));
                }
            }
        }
        Ok(self)
    }
}

impl FromStr for Grid {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: String| Error::invalid("grid", format!("`{s}`: {why}"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| bad(format!("`{t}`: {e}")));
        let parts: Vec<&str> = s.split(':').collect();
        let grid = match parts.as_slice() {
            [kind @ ("log" | "lin"), min, max, n] => {
                let n = n
                    .trim()
                    .parse::<usize>()
                    .map_err(|e| bad(format!("point count: {e}")))?;
                let (min, max) = (num(min)?, num(max)?);
                if *kind == "log" {
                    Grid::Log { min, max, n }
                } else {
                    Grid::Lin { min, max, n }
                }
            }
            [list] => Grid::Points(list.split(',').map(num).collect::<Result<_>>()?),
            _ => return Err(bad("expected log:min:max:n, lin:min:max:n or a value list".into())),
        };
        grid.validate()
    }
}

/// Axes of a bounds sweep.
#[derive(Debug, Clone, PartialEq)]
pub enum SweepAxes {
    /// Cartesian `δ × B` plane, `δ` outer.
    Plane { delta: Grid, bandwidth: Grid },
    /// Occupancy directly, reported as `δ = 1`, `B = δB`.
    Occupancy(Grid),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axes: SweepAxes,
    /// Emit the upper bound with this `g_min·ψ`.
    pub penalty_factor: Option<f64>,
}

impl SweepSpec {
    /// `(δ, B)` pairs in output order.
    pub fn points(&self) -> Result<Vec<(f64, f64)>> {
        let pts: Vec<(f64, f64)> = match &self.axes {
            SweepAxes::Plane { delta, bandwidth } => {
                let d = delta.values();
                if d.iter().any(|&x| !(x > 0.0 && x <= 1.0)) {
                    return Err(Error::invalid("delta", "duty cycle must lie in (0, 1]"));
                }
                let b = bandwidth.values();
                d.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
            }
            SweepAxes::Occupancy(g) => g.values().into_iter().map(|x| (1.0, x)).collect(),
        };
        if pts.iter().any(|&(_, b)| !(b > 0.0)) {
            return Err(Error::invalid("bandwidth", "must be > 0"));
        }
        Ok(pts)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsRow {
    pub delta: f64,
    #[serde(rename = "B")]
    pub bandwidth: f64,
    #[serde(rename = "deltaB")]
    pub occupancy: f64,
    #[serde(rename = "R_LB")]
    pub rate_lower: f64,
    /// lower bound clamped at 0 for plotting
    #[serde(rename = "R_LB_plot")]
    pub rate_lower_plot: f64,
    #[serde(rename = "R_UB", skip_serializing_if = "Option::is_none")]
    pub rate_upper: Option<f64>,
    #[serde(rename = "C_inf")]
    pub wideband_limit: f64,
    pub gap: f64,
}

/// Rows of a bounds sweep, computed in parallel and returned in grid order.
pub fn bounds_rows(scenario: &ChannelScenario, spec: &SweepSpec) -> Result<Vec<BoundsRow>> {
    if spec.penalty_factor.is_some() && !scenario.fading().is_rayleigh() {
        return Err(Error::UnsupportedFading(scenario.fading().to_string()));
    }
    let cinf = wideband_limit(scenario);
    spec.points()?
        .par_iter()
        .map(|&(delta, bandwidth)| {
            let occupancy = delta * bandwidth;
            let r = rate_lower_bound(scenario, occupancy)?;
            let ub = spec
                .penalty_factor
                .map(|pf| rate_upper_bound(scenario, occupancy, pf))
                .transpose()?;
            Ok(BoundsRow {
                delta,
                bandwidth,
                occupancy,
                rate_lower: r,
                rate_lower_plot: r.max(0.0),
                rate_upper: ub,
                wideband_limit: cinf,
                gap: 1.0 - r / cinf,
            })
        })
        .collect()
}

/// `α_min` at one error percentage.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlphaMinCell {
    pub p: f64,
    pub epsilon: f64,
    pub alpha_min: f64,
    /// `ε = 0`: the bracket has collapsed onto `α_max`.
    pub collapsed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaRow {
    pub bctc: f64,
    pub alpha_max: f64,
    pub alpha_max_over_2: f64,
    pub alpha_min: Vec<AlphaMinCell>,
    pub alpha_plus: f64,
    pub alpha_minus: f64,
    /// Some raw value lies outside `(0, 1]`.
    pub clamped: bool,
}

impl AlphaRow {
    /// Row-wise ordering `α⁻ < α⁺ < α_max` and `α_max/2 ≤ α_min(p)`.
    pub fn is_ordered(&self) -> bool {
        self.alpha_minus < self.alpha_plus
            && self.alpha_plus < self.alpha_max
            && self.alpha_min.iter().all(|c| c.alpha_min >= self.alpha_max_over_2)
    }
}

/// α estimates over a grid of coherence products, `α_min` at each percentage in `p_list`.
pub fn alpha_rows(nt: usize, nr: usize, snr: f64, bctc: &[f64], p_list: &[f64]) -> Result<Vec<AlphaRow>> {
    let eps: Vec<(f64, f64)> = p_list
        .iter()
        .map(|&p| epsilon_for_error_pct(p, snr).map(|e| (p, e)))
        .collect::<Result<_>>()?;
    bctc.iter()
        .map(|&lc| {
            // ε only shapes α_min, which is recomputed per p below
            let b = alpha_brackets_for(nt, nr, lc, snr, 1.0)?;
            let alpha_min = eps
                .iter()
                .map(|&(p, e)| {
                    let (alpha_min, collapsed) = alpha_min_for_epsilon(b.alpha_max, e)?;
                    Ok(AlphaMinCell {
                        p,
                        epsilon: e,
                        alpha_min,
                        collapsed,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let out_of_range = |a: f64| !(a > 0.0 && a <= 1.0);
            let clamped = [b.alpha_max, b.alpha_plus, b.alpha_minus].into_iter().any(out_of_range)
                || alpha_min.iter().any(|c| out_of_range(c.alpha_min));
            Ok(AlphaRow {
                bctc: lc,
                alpha_max: b.alpha_max,
                alpha_max_over_2: b.alpha_max / 2.0,
                alpha_min,
                alpha_plus: b.alpha_plus,
                alpha_minus: b.alpha_minus,
                clamped,
            })
        })
        .collect()
}

/// Normalized bracket surfaces for `nt, nr ∈ 1..=max_antennas`, `nt` outer.
pub fn fig6_rows(max_antennas: usize) -> Vec<Fig6Row> {
    (1..=max_antennas)
        .flat_map(|nt| (1..=max_antennas).map(move |nr| fig6_row(nt, nr)))
        .collect()
}
