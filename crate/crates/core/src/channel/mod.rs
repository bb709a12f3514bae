//! Discrete block-fading MIMO channel.
//!
//! Sampling at rate `B` over one coherence time gives `K = B·Tc` samples and
//! `M = B·D = K/Lc` delay taps per antenna pair. Taps of pair `(u, v)` are
//! independent with variances `gₙ`, `Σ gₙ = 1`, and the frequency response
//! is their zero-padded `K`-point DFT.

mod dft;
mod filterbank;
mod pilot;
mod taps;

pub use dft::{analytic_frequency_correlation, dft, frequency_response, naive_dft};
pub use filterbank::{block_idft_matrix, filterbank_equivalence_check, precoding_identity_check, FilterBankCodeword};
pub use pilot::{circulant_eigenvalues, dense_gram_eigenvalues, CirculantSpectrum, PilotCirculant};
pub use taps::{draw_tap, sample_taps, sample_taps_with_profile, DiscreteChannel, GainProfile};
