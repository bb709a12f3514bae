//! Closed-form rate bounds versus bandwidth occupancy.
//!
//! Every function here is pure. Occupancy `δB` enters as a single number, so
//! two `(δ, B)` pairs with the same product give bit-identical results.

mod critical;
mod polynomial;
mod rates;

pub use critical::{critical_bracket, fig6_row, optimal_occupancy, CriticalBracket, Fig6Row, OptimalOccupancy};
pub use polynomial::{
    alpha_brackets, alpha_brackets_for, alpha_min_for_epsilon, coherence_requirement, epsilon_for_error_pct,
    normalize_per_symbol_rate, sublinear_rate_bound, AlphaBracket, SublinearRate,
};
pub use rates::{
    bounds_report, lower_bound_derivative_terms, rate_lower_bound, rate_upper_bound, wideband_limit, BoundsReport,
};

use crate::error::{Error, Result};

fn check_occupancy(occupancy: f64) -> Result<()> {
    if occupancy.is_finite() && occupancy > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(
            "occupancy",
            format!("must be finite and > 0, got {occupancy}"),
        ))
    }
}
