//! Small dense helpers on top of nalgebra.

use nalgebra::{Matrix6, Schur, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Convergence tolerance handed to the real Schur iteration.
pub const EIGEN_TOL: f64 = 1e-12;
const EIGEN_MAX_ITER: usize = 10_000;

/// Eigenvalues of a general real 6x6 matrix, sorted by (real, imag).
pub fn eigenvalues(m: &Matrix6<f64>) -> Result<Vec<Complex64>> {
    let schur = Schur::try_new(*m, EIGEN_TOL, EIGEN_MAX_ITER)
        .ok_or_else(|| Error::NumericalFailure("real Schur iteration did not converge".into()))?;
    let mut ev: Vec<Complex64> = schur.complex_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    Ok(ev)
}

/// Principal square root of a symmetric positive semi-definite matrix.
pub fn sym_sqrt(m: &Matrix6<f64>) -> Matrix6<f64> {
    let eig = SymmetricEigen::new(*m);
    let mut d = eig.eigenvalues;
    d.apply(|v| *v = v.max(0.0).sqrt());
    let q = eig.eigenvectors;
    q * Matrix6::from_diagonal(&d) * q.transpose()
}
