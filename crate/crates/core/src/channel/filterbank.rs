use std::f64::consts::TAU;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::dft::naive_dft;
use super::taps::DiscreteChannel;
use crate::error::{Error, Result};
use crate::linalg::C64;

/// Block-diagonal `K×K` matrix with `M` copies of the unitary `Lc`-point
/// IDFT `F[v][ℓ] = exp(j2πvℓ/Lc)/√Lc` on its diagonal.
pub fn block_idft_matrix(l_symbols: usize, m_bins: usize) -> DMatrix<C64> {
    let k = l_symbols * m_bins;
    let norm = (l_symbols as f64).sqrt().recip();
    DMatrix::from_fn(k, k, |i, j| {
        if i / l_symbols != j / l_symbols {
            return C64::new(0.0, 0.0);
        }
        let (v, l) = (i % l_symbols, j % l_symbols);
        C64::from_polar(norm, TAU * ((v * l) % l_symbols) as f64 / l_symbols as f64)
    })
}

/// Symbols `x[m, ℓ]` of the filter-bank model: `M` frequency bins, `Lc`
/// symbols per bin within one coherence block.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterBankCodeword {
    m_bins: usize,
    l_symbols: usize,
    /// row-major `[m][ℓ]`
    symbols: Vec<C64>,
}

impl FilterBankCodeword {
    pub fn new(m_bins: usize, l_symbols: usize, symbols: Vec<C64>) -> Result<Self> {
        if m_bins == 0 || l_symbols == 0 || symbols.len() != m_bins * l_symbols {
            return Err(Error::Dimension(format!(
                "{} symbols for M = {m_bins}, Lc = {l_symbols}",
                symbols.len()
            )));
        }
        Ok(FilterBankCodeword {
            m_bins,
            l_symbols,
            symbols,
        })
    }

    /// i.i.d. `CN(0, 1)` symbols.
    pub fn gaussian<R: Rng + ?Sized>(m_bins: usize, l_symbols: usize, rng: &mut R) -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let symbols = (0..m_bins * l_symbols)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C64::new(s * re, s * im)
            })
            .collect();
        FilterBankCodeword {
            m_bins,
            l_symbols,
            symbols,
        }
    }

    pub fn m_bins(&self) -> usize {
        self.m_bins
    }

    pub fn l_symbols(&self) -> usize {
        self.l_symbols
    }

    pub fn symbol(&self, m: usize, l: usize) -> C64 {
        self.symbols[m * self.l_symbols + l]
    }

    /// Stacked `K`-vector, bin-major, matching the block layout of `Φ`.
    pub fn as_vector(&self) -> DVector<C64> {
        DVector::from_column_slice(&self.symbols)
    }
}

fn check_pair(codeword: &FilterBankCodeword, channel: &DiscreteChannel) -> Result<()> {
    if channel.nt() != 1 || channel.nr() != 1 {
        return Err(Error::Dimension(format!(
            "filter-bank equivalence is SISO, got {}x{}",
            channel.nr(),
            channel.nt()
        )));
    }
    let k = codeword.m_bins * codeword.l_symbols;
    if channel.k_samples() != k || channel.m_taps() != codeword.m_bins {
        return Err(Error::Dimension(format!(
            "channel has K = {}, M = {}; codeword needs K = M·Lc = {k}, M = {}",
            channel.k_samples(),
            channel.m_taps(),
            codeword.m_bins
        )));
    }
    Ok(())
}

/// `diag(h[⌊k/Lc⌋])`: bin `m` sees the flat coefficient `h[m]`.
fn bin_channel(channel: &DiscreteChannel, l_symbols: usize) -> DVector<C64> {
    let h = channel.taps(0, 0);
    DVector::from_fn(channel.k_samples(), |k, _| h[k / l_symbols])
}

/// Max-abs discrepancy between the sampled filter-bank chain and `y = HΦx`.
///
/// Chain: each bin `m` carries the `K`-periodic band-limited pulse occupying
/// DFT bins `m·Lc .. (m+1)·Lc` (the sampled counterpart of a `sinc(t·Bc)`
/// pulse modulated to the bin centre); symbol `ℓ` sits at time slot
/// `(−ℓ mod Lc)·M`; bin `m` is scaled by its coefficient; the sum is sampled
/// over one block and passed through a direct `K`-point DFT.
pub fn filterbank_equivalence_check(codeword: &FilterBankCodeword, channel: &DiscreteChannel) -> Result<f64> {
    check_pair(codeword, channel)?;
    let (m_bins, lc) = (codeword.m_bins, codeword.l_symbols);
    let k = m_bins * lc;
    let h = channel.taps(0, 0);
    let amp = 1.0 / (k as f64 * (lc as f64).sqrt());

    // pulse[m][t] = amp · Σ_q exp(j2π(m·Lc + q)t/K)
    let pulse: Vec<Vec<C64>> = (0..m_bins)
        .map(|m| {
            (0..k)
                .map(|t| {
                    (0..lc)
                        .map(|q| C64::from_polar(amp, TAU * (((m * lc + q) * t) % k) as f64 / k as f64))
                        .sum()
                })
                .collect()
        })
        .collect();

    let mut y_time = vec![C64::new(0.0, 0.0); k];
    for m in 0..m_bins {
        for l in 0..lc {
            let shift = ((lc - l) % lc) * m_bins;
            let a = h[m] * codeword.symbol(m, l);
            for (t, y) in y_time.iter_mut().enumerate() {
                *y += a * pulse[m][(t + k - shift) % k];
            }
        }
    }
    let y_chain = naive_dft(&y_time, k);

    let phi = block_idft_matrix(lc, m_bins);
    let y_direct = (phi * codeword.as_vector()).component_mul(&bin_channel(channel, lc));
    Ok(y_chain
        .iter()
        .zip(y_direct.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}

/// `max |HΦΦᴴx − Hx|`: precoding by `Φᴴ` undoes the block IDFT.
pub fn precoding_identity_check(codeword: &FilterBankCodeword, channel: &DiscreteChannel) -> Result<f64> {
    check_pair(codeword, channel)?;
    let lc = codeword.l_symbols;
    let phi = block_idft_matrix(lc, codeword.m_bins);
    let x = codeword.as_vector();
    let hd = bin_channel(channel, lc);
    let precoded = (&phi * (phi.adjoint() * &x)).component_mul(&hd);
    let direct = x.component_mul(&hd);
    Ok(precoded
        .iter()
        .zip(direct.iter())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max))
}
