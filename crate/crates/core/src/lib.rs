//! Capacity bounds of non-coherent wideband MIMO fading channels as a
//! function of bandwidth occupancy `δB`.
//!
//! * [`scenario`]: physical parameters, fading families and scenario files.
//! * [`bounds`]: closed-form lower/upper rate bounds, the optimal and
//!   critical occupancy, and the polynomial (sublinear-exponent) algebra.
//! * [`channel`]: discrete block-fading channel, DFT response, circulant
//!   pilot matrix and the filter-bank/OFDM equivalence.
//! * [`mcverify`]: seeded parallel Monte-Carlo checks of the proof steps.
//! * [`tables`]: sweep grids and the row types emitted by the CLI.
//!
//! Rates are in nats/s, frequencies in hertz, logarithms natural.

// `!(x > 0.0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// oracle constants are kept at the digits they were printed with
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod bounds;
pub mod channel;
pub mod error;
pub mod linalg;
pub mod mcverify;
pub mod optimize;
pub mod scenario;
pub mod tables;

pub use bounds::{
    alpha_brackets, alpha_min_for_epsilon, bounds_report, coherence_requirement, critical_bracket,
    epsilon_for_error_pct, normalize_per_symbol_rate, optimal_occupancy, rate_lower_bound, rate_upper_bound,
    sublinear_rate_bound, AlphaBracket, BoundsReport, CriticalBracket, SublinearRate,
};
pub use channel::{
    block_idft_matrix, circulant_eigenvalues, filterbank_equivalence_check, frequency_response, sample_taps,
    DiscreteChannel, FilterBankCodeword, GainProfile, PilotCirculant,
};
pub use error::{Error, Result};
pub use mcverify::{McConfig, McEstimate};
pub use scenario::{kurtosis, parse_scenario, snr_per_dof, ChannelScenario, FadingFamily, OccupancyPoint};
