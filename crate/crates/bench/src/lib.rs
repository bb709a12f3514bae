//! Shared fixtures for the criterion benches.

use occupancy_core::{ChannelScenario, FadingFamily, McConfig};

/// Low-SNR SISO setting used for the surface plots.
pub fn siso() -> ChannelScenario {
    ChannelScenario::with_coherence_product(100.0, 1e3, 1, 1, FadingFamily::Rayleigh).unwrap()
}

/// 2x2 setting at `P/N0 = 1e7`.
pub fn mimo(coherence_product: f64) -> ChannelScenario {
    ChannelScenario::with_coherence_product(1e7, coherence_product, 2, 2, FadingFamily::Rayleigh).unwrap()
}

/// Small trial counts keep one iteration in the millisecond range.
pub fn mc(trials: usize) -> McConfig {
    McConfig::new(trials, 7)
}
