//! Exact diagonalization of the quadratic Hamiltonian `H = 1/2 v^T M v` in
//! the quadrature basis `v = (x, y, z, p_x, p_y, p_z)`.
//!
//! This is independent of the closed forms in [`crate::normal_modes`]; the
//! two are compared, never assumed equal, away from the decoupled limit.

use nalgebra::{Matrix3, Matrix6, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::LinearizedParams;
use crate::normal_modes::NormalModeResult;

/// Relative tolerance for matching `+i eps` / `-i eps` pairs.
pub const PAIR_TOL: f64 = 1e-9;

/// Absolute tolerance of the boundary bisection.
pub const BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticForm {
    pub m: Matrix6<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticSpectrum {
    /// Normal-mode frequencies, ascending; `None` when `M` is not positive
    /// definite.
    pub eigs: Option<[f64; 3]>,
    /// Eigenvalues of `J M`.
    pub dynamical: Vec<Complex64>,
    pub min_hessian_eig: f64,
}

impl SymplecticSpectrum {
    pub fn unstable(&self) -> bool {
        self.eigs.is_none()
    }
}

/// `J = [[0, I], [-I, 0]]` on (positions; momenta).
pub fn symplectic_form() -> Matrix6<f64> {
    let mut j = Matrix6::zeros();
    for i in 0..3 {
        j[(i, i + 3)] = 1.0;
        j[(i + 3, i)] = -1.0;
    }
    j
}

pub fn hessian(lp: &LinearizedParams) -> Result<QuadraticForm> {
    lp.validate()?;
    let (o1, o2, wm) = (lp.omega1, lp.omega2, lp.omega_m);
    let mut m = Matrix6::zeros();
    m[(0, 0)] = o1 * o1;
    m[(1, 1)] = o2 * o2;
    m[(2, 2)] = wm * wm;
    for i in 3..6 {
        m[(i, i)] = 1.0;
    }
    let xz = -2.0 * lp.coupling1 * (o1 * wm).sqrt();
    let yz = -2.0 * lp.coupling2 * (o2 * wm).sqrt();
    let xy = lp.lambda * (o1 * o2).sqrt();
    let pxpy = lp.lambda / (o1 * o2).sqrt();
    for (i, j, v) in [(0, 2, xz), (1, 2, yz), (0, 1, xy), (3, 4, pxpy)] {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    Ok(QuadraticForm { m })
}

fn min_eigenvalue(m: &Matrix6<f64>) -> f64 {
    SymmetricEigen::new(*m).eigenvalues.min()
}

/// Symplectic eigenvalues of a positive-definite `m` via the antisymmetric
/// matrix `R J R`, `R = m^{1/2}`: the eigenvalues of `(RJR)^T (RJR)` are the
/// squared symplectic eigenvalues, each twice.
fn williamson_frequencies(m: &Matrix6<f64>) -> [f64; 3] {
    let r = linalg::sym_sqrt(m);
    let a = r * symplectic_form() * r;
    let mut ev: Vec<f64> = SymmetricEigen::new(a.transpose() * a).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    [ev[0], ev[2], ev[4]].map(|e| e.max(0.0).sqrt())
}

fn check_hamiltonian_symmetry(eigs: &[Complex64]) -> Result<()> {
    let scale = eigs.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let near = |target: Complex64| eigs.iter().any(|z| (z - target).norm() <= PAIR_TOL * scale);
    for &z in eigs {
        if !near(-z) || !near(z.conj()) {
            return Err(Error::NumericalFailure(format!(
                "spectrum of J M not closed under negation/conjugation at {z}"
            )));
        }
    }
    Ok(())
}

pub fn symplectic_eigenvalues(q: &QuadraticForm) -> Result<SymplecticSpectrum> {
    let k = symplectic_form() * q.m;
    let dynamical = linalg::eigenvalues(&k)?;
    check_hamiltonian_symmetry(&dynamical)?;
    let min_hessian_eig = min_eigenvalue(&q.m);

    if min_hessian_eig <= 0.0 {
        return Ok(SymplecticSpectrum { eigs: None, dynamical, min_hessian_eig });
    }

    let eigs = williamson_frequencies(&q.m);
    // every +eps must appear as an (almost) purely imaginary pair in J M
    for &e in &eigs {
        let matched = dynamical
            .iter()
            .any(|z| (z.im.abs() - e).abs() <= PAIR_TOL * e.max(1.0) && z.re.abs() <= PAIR_TOL * e.max(1.0));
        if !matched {
            return Err(Error::NumericalFailure(format!(
                "symplectic eigenvalue {e} has no matching pair in the dynamical spectrum"
            )));
        }
    }
    Ok(SymplecticSpectrum { eigs: Some(eigs), dynamical, min_hessian_eig })
}

/// Ground-state covariance `sigma_ij = <{v_i, v_j}>/2` of `H = 1/2 v^T M v`.
///
/// `sigma = 1/2 R^{-1} |R J R| R^{-1}` with `R = M^{1/2}` and `|A| = (A^T A)^{1/2}`.
pub fn ground_state_covariance(q: &QuadraticForm) -> Result<Matrix6<f64>> {
    let min_eig = min_eigenvalue(&q.m);
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    let r = linalg::sym_sqrt(&q.m);
    let r_inv = r
        .try_inverse()
        .ok_or_else(|| Error::NumericalFailure("square root of M is singular".into()))?;
    let a = r * symplectic_form() * r;
    let abs_a = linalg::sym_sqrt(&(a.transpose() * a));
    let sigma = 0.5 * r_inv * abs_a * r_inv;
    Ok(0.5 * (sigma + sigma.transpose()))
}

/// Symplectic eigenvalues of a covariance matrix; all equal 1/2 for a pure
/// Gaussian state.
pub fn covariance_symplectic_eigenvalues(sigma: &Matrix6<f64>) -> Result<[f64; 3]> {
    let min_eig = min_eigenvalue(sigma);
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eig });
    }
    Ok(williamson_frequencies(sigma))
}

/// Bisection in `lambda` for the zero of the smallest Hessian eigenvalue.
pub fn stability_boundary_lambda(lp: &LinearizedParams, bracket: (f64, f64)) -> Result<f64> {
    let f = |l: f64| -> Result<f64> {
        let mut p = *lp;
        p.lambda = l;
        Ok(min_eigenvalue(&hessian(&p)?.m))
    };
    let (mut lo, mut hi) = bracket;
    let (mut f_lo, f_hi) = (f(lo)?, f(hi)?);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi });
    }
    while (hi - lo).abs() > BOUNDARY_TOL {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Determinant of the momentum block `(p_x, p_y)` of the Hessian.
pub fn momentum_block_det(q: &QuadraticForm) -> f64 {
    q.m[(3, 3)] * q.m[(4, 4)] - q.m[(3, 4)] * q.m[(4, 3)]
}

/// Position block `(x, y, z)` of the Hessian.
pub fn position_block(q: &QuadraticForm) -> Matrix3<f64> {
    q.m.fixed_view::<3, 3>(0, 0).into_owned()
}

/// Largest gap between the sorted closed-form energies and the sorted exact
/// symplectic eigenvalues. `None` when either side is not a set of three
/// real frequencies.
pub fn closed_form_discrepancy(nm: &NormalModeResult, spec: &SymplecticSpectrum) -> Option<f64> {
    let exact = spec.eigs?;
    let mut closed = [nm.eps_x_final, nm.eps_y_final, nm.eps_z_final];
    if closed.iter().any(|z| z.im != 0.0 || !z.re.is_finite()) {
        return None;
    }
    closed.sort_by(|a, b| a.re.total_cmp(&b.re));
    Some(closed.iter().zip(exact).map(|(c, e)| (c.re - e).abs()).fold(0.0, f64::max))
}
