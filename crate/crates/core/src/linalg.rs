//! Small dense helpers on complex matrices.

use nalgebra::DMatrix;
use num_complex::Complex64;

pub type C64 = Complex64;

/// `ln det(I + A)` for Hermitian positive semi-definite `A`, via Cholesky.
/// Returns `None` if the factorization fails (A not PSD to working precision).
pub fn log_det_identity_plus(a: &DMatrix<C64>) -> Option<f64> {
    let n = a.nrows();
    let m = DMatrix::<C64>::identity(n, n) + a;
    let chol = m.cholesky()?;
    let l = chol.l_dirty();
    Some((0..n).map(|i| l[(i, i)].re.ln()).sum::<f64>() * 2.0)
}

/// `A·Aᴴ`
pub fn gram_outer(a: &DMatrix<C64>) -> DMatrix<C64> {
    a * a.adjoint()
}

/// Largest entry-wise modulus of `a − b`.
pub fn max_abs_diff(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Real eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(a: &DMatrix<C64>) -> Vec<f64> {
    let eig = nalgebra::SymmetricEigen::new(a.clone());
    let mut v: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    v.sort_by(|x, y| x.total_cmp(y));
    v
}
