use std::f64::consts::TAU;

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, C64};

/// `K × (M·Nt)` circulant pilot matrix `Ξ` with entry `(i, j) = x̃[(i − j) mod K]`.
///
/// Column `u·M + d` is the pilot delayed by `u·M + d` samples, so the MIMO
/// pilot is the single-antenna one with antenna `u` delayed by `u·M`.
#[derive(Debug, Clone, PartialEq)]
pub struct PilotCirculant {
    k_rows: usize,
    cols: usize,
    base_signal: Vec<C64>,
}

impl PilotCirculant {
    /// `base_signal` must already have unit power `(1/K)Σ|x̃|² = 1` to 1e-12.
    pub fn new(base_signal: Vec<C64>, cols: usize) -> Result<Self> {
        let k = base_signal.len();
        if k == 0 || cols == 0 || cols > k {
            return Err(Error::Dimension(format!(
                "pilot of length {k} cannot have {cols} columns"
            )));
        }
        let power = unit_power(&base_signal);
        if (power - 1.0).abs() > 1e-12 {
            return Err(Error::invalid("base_signal", format!("power is {power}, expected 1")));
        }
        Ok(PilotCirculant {
            k_rows: k,
            cols,
            base_signal,
        })
    }

    /// Rescale `x` to unit empirical power first.
    pub fn normalized(mut x: Vec<C64>, cols: usize) -> Result<Self> {
        let power = unit_power(&x);
        if !(power > 0.0) {
            return Err(Error::invalid("base_signal", "zero signal cannot be normalized"));
        }
        let s = power.sqrt().recip();
        x.iter_mut().for_each(|v| *v *= s);
        Self::new(x, cols)
    }

    /// Gaussian pilot renormalized to unit empirical power.
    pub fn gaussian<R: Rng + ?Sized>(k_rows: usize, cols: usize, rng: &mut R) -> Result<Self> {
        let x = (0..k_rows)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                C64::new(re, im)
            })
            .collect();
        Self::normalized(x, cols)
    }

    pub fn k_rows(&self) -> usize {
        self.k_rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn base_signal(&self) -> &[C64] {
        &self.base_signal
    }

    pub fn entry(&self, i: usize, j: usize) -> C64 {
        self.base_signal[(i + self.k_rows - j % self.k_rows) % self.k_rows]
    }

    pub fn matrix(&self) -> DMatrix<C64> {
        DMatrix::from_fn(self.k_rows, self.cols, |i, j| self.entry(i, j))
    }

    /// `ΞᴴΞ`, built from the circular autocorrelation of `x̃` (Hermitian Toeplitz).
    pub fn gram(&self) -> DMatrix<C64> {
        let k = self.k_rows;
        let x = &self.base_signal;
        // r[d] = Σ_t conj(x[t]) x[t+d]  so that (ΞᴴΞ)_{ij} = r[i−j]
        let r: Vec<C64> = (0..self.cols)
            .map(|d| (0..k).map(|t| x[t].conj() * x[(t + d) % k]).sum())
            .collect();
        DMatrix::from_fn(
            self.cols,
            self.cols,
            |i, j| if i >= j { r[i - j] } else { r[j - i].conj() },
        )
    }
}

fn unit_power(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm_sqr()).sum::<f64>() / x.len() as f64
}

/// Eigenvalue estimates of `ΞᴴΞ` and `ψ = λ_min/K`.
#[derive(Debug, Clone, PartialEq)]
pub struct CirculantSpectrum {
    pub eigenvalues: Vec<f64>,
    pub psi: f64,
}

/// `λ_m = |Σₖ x̃[k]·exp(−j2πkm/(M·Nt))|²` for `m = 0..M·Nt`.
///
/// This is the DFT-of-the-first-column formula for a circulant matrix. It is
/// exact when `Ξ` is square (`K = M·Nt`). For a tall `Ξ` the Gram matrix is
/// Toeplitz rather than circulant and the formula only approximates its
/// spectrum; [`dense_gram_eigenvalues`] gives the exact values.
pub fn circulant_eigenvalues(pilot: &PilotCirculant) -> CirculantSpectrum {
    let n = pilot.cols();
    let eigenvalues: Vec<f64> = (0..n)
        .map(|m| {
            pilot
                .base_signal()
                .iter()
                .enumerate()
                .map(|(k, &x)| x * C64::from_polar(1.0, -TAU * ((k * m) % n) as f64 / n as f64))
                .sum::<C64>()
                .norm_sqr()
        })
        .collect();
    let min = eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    CirculantSpectrum {
        psi: min / pilot.k_rows() as f64,
        eigenvalues,
    }
}

/// Eigenvalues of `ΞᴴΞ` from a dense Hermitian eigensolver, ascending.
pub fn dense_gram_eigenvalues(pilot: &PilotCirculant) -> Vec<f64> {
    hermitian_eigenvalues(&pilot.gram())
}
