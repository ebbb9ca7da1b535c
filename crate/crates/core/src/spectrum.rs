//! Mechanical displacement spectrum from the frequency-domain solution of the
//! linearized quadrature equations.
//!
//! `Q(w) = (A1 + ... + A5) / B` where each `Ak` is one noise input times a
//! rational multiplier. The symmetrized spectrum combines the multipliers
//! with the input correlators; white unit-variance inputs contribute
//! `|f|^2 / |B|^2` with no stray `2 pi`.
//!
//! `B = C4 - C5` contains a `G^2` factor in `C4`; it is read as `G2^2`, the
//! only reading under which the multipliers coincide with the resolvent of
//! the drift matrix (see the tests).

use nalgebra::SMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::langevin::drift_matrix;
use crate::model::LinearizedParams;
use crate::peaks::{find_peaks, Peak};

/// Below this `|w| / T_dim`, `w coth(w / 2T)` is evaluated by its series.
pub const COTH_SERIES_CUTOFF: f64 = 1e-6;

/// Default relative prominence used when a spectrum is assembled.
pub const DEFAULT_PROMINENCE_FRAC: f64 = 0.01;

/// Noise input channels, in the order used by the correlator matrices.
pub const CHANNELS: [&str; 5] = ["W", "X_in1", "Y_in1", "X_in2", "Y_in2"];

type Matrix5c = SMatrix<Complex64, 5, 5>;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransferCoefficients {
    pub c1: Complex64,
    pub c2: Complex64,
    pub c3: Complex64,
    pub c4: Complex64,
    pub c5: Complex64,
    pub f_w: Complex64,
    pub f_x1: Complex64,
    pub f_y1: Complex64,
    pub f_x2: Complex64,
    pub f_y2: Complex64,
    pub b: Complex64,
}

impl TransferCoefficients {
    /// Multipliers in [`CHANNELS`] order.
    pub fn multipliers(&self) -> [Complex64; 5] {
        [self.f_w, self.f_x1, self.f_y1, self.f_x2, self.f_y2]
    }

    /// `Q(w)` per unit of each input: `f_k / B`.
    pub fn transfer(&self) -> [Complex64; 5] {
        self.multipliers().map(|f| f / self.b)
    }

    fn fields(&self) -> [Complex64; 11] {
        [
            self.c1, self.c2, self.c3, self.c4, self.c5, self.f_w, self.f_x1, self.f_y1, self.f_x2, self.f_y2,
            self.b,
        ]
    }

    /// Largest relative deviation between two coefficient sets.
    pub fn max_relative_diff(&self, other: &Self) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields())
            .map(|(a, b)| (a - b).norm() / a.norm().max(b.norm()).max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max)
    }

    pub fn conj(&self) -> Self {
        let c = |z: Complex64| z.conj();
        Self {
            c1: c(self.c1),
            c2: c(self.c2),
            c3: c(self.c3),
            c4: c(self.c4),
            c5: c(self.c5),
            f_w: c(self.f_w),
            f_x1: c(self.f_x1),
            f_y1: c(self.f_y1),
            f_x2: c(self.f_x2),
            f_y2: c(self.f_y2),
            b: c(self.b),
        }
    }
}

pub fn coefficients(lp: &LinearizedParams, omega: f64) -> TransferCoefficients {
    let i = Complex64::i();
    let w = omega;
    let wm = lp.omega_m;
    let (d1, d2) = (lp.delta1(), lp.delta2());
    let (g1, g2, l) = (lp.coupling1, lp.coupling2, lp.lambda);
    let (k1, k2, gm) = (lp.gamma_c1, lp.gamma_c2, lp.gamma_m);

    // (i w + gamma_c/2) and the optical resonance factor
    // Delta^2 - w^2 + gamma_c^2/4 + i w gamma_c
    let a1 = i * w + k1 / 2.0;
    let a2 = i * w + k2 / 2.0;
    let r1 = d1 * d1 - w * w + k1 * k1 / 4.0 + i * w * k1;
    let r2 = d2 * d2 - w * w + k2 * k2 / 4.0 + i * w * k2;
    let mech = wm * wm - w * w + i * w * gm;
    let l2 = l * l;
    // Delta1 (i w + gamma_c2/2) + Delta2 (i w + gamma_c1/2)
    let mixed = d1 * a2 + d2 * a1;

    let c1 = a1 * r2 + l2 * a2;
    let c2 = r2 * r1 + l2 * l2 + 2.0 * l2 * (a1 * a2 - d1 * d2);
    let c3 = wm * g1 * (a1 * r2 + l2 * a2) + l * wm * g2 * d1 * a2 + l * wm * g2 * d2 * a1;
    let c4 = r2 * c2 * (mech * c1 + wm * g2 * g2 * d2 * a1 - l * wm * g1 * g2 * a2);
    let c5 = c3 * (l * g2 * c1 * a2 - (l * g2 * d2 + g1 * r2) * (d1 * r2 - l2 * d2));
    let b = c4 - c5;

    let f_w = wm * r2 * c1 * c2;
    let f_x1 = k1.sqrt() * r2 * c1 * c3;
    let f_y1 = k1.sqrt() * r2 * (l * wm * g2 * a2 * c2 + (l2 * d2 - d1 * r2) * c3);
    let f_x2 = k2.sqrt()
        * r2
        * (l2 * wm * g2 * mixed * mixed + wm * g2 * c2 * a1 * a2 + l * wm * g1 * c1 * mixed);
    let f_y2 = k2.sqrt() * (l * c3 * (l2 * d2 * d2 - d1 * d2 * r2 + c1 * a2) - wm * g2 * d2 * c2 * a1 * r2);

    TransferCoefficients { c1, c2, c3, c4, c5, f_w, f_x1, f_y1, f_x2, f_y2, b }
}

/// `w coth(w / 2T)` with its `w -> 0` limit `2T` and `T = 0` limit `|w|`.
pub fn thermal_kernel(omega: f64, t_dim: f64) -> f64 {
    if t_dim == 0.0 {
        return omega.abs();
    }
    let x = omega / (2.0 * t_dim);
    if omega.abs() / t_dim < COTH_SERIES_CUTOFF {
        2.0 * t_dim * (1.0 + x * x / 3.0)
    } else {
        omega / x.tanh()
    }
}

/// Input correlators `<n_k(w) n_l(w')> / (2 pi delta(w + w'))`, channels in
/// [`CHANNELS`] order.
pub fn input_correlator(lp: &LinearizedParams, omega: f64) -> Matrix5c {
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let mut c = Matrix5c::zeros();
    // w (1 + coth(w / 2T)) = w + w coth(w / 2T)
    c[(0, 0)] = Complex64::new(lp.gamma_m / lp.omega_m * (omega + thermal_kernel(omega, lp.t_dim)), 0.0);
    for (x, y) in [(1, 2), (3, 4)] {
        c[(x, x)] = one;
        c[(y, y)] = one;
        c[(x, y)] = i;
        c[(y, x)] = -i;
    }
    c
}

/// Kernel of the symmetrized spectrum: `(c(w) + c(-w)^T) / 2`.
pub fn symmetrized_correlator(lp: &LinearizedParams, omega: f64) -> Matrix5c {
    (input_correlator(lp, omega) + input_correlator(lp, -omega).transpose()) * Complex64::new(0.5, 0.0)
}

/// `S_Q(w)` from the full correlator contraction.
pub fn spectral_density(lp: &LinearizedParams, omega: f64) -> f64 {
    let t = coefficients(lp, omega).transfer();
    let k = symmetrized_correlator(lp, omega);
    let mut s = Complex64::new(0.0, 0.0);
    for a in 0..5 {
        for b in 0..5 {
            s += t[a] * k[(a, b)] * t[b].conj();
        }
    }
    s.re
}

/// `S_Q(w)` in its reduced form: thermal term plus four vacuum terms.
pub fn spectral_density_reduced(lp: &LinearizedParams, omega: f64) -> f64 {
    let c = coefficients(lp, omega);
    let thermal = lp.gamma_m / lp.omega_m * thermal_kernel(omega, lp.t_dim);
    let num = c.f_w.norm_sqr() * thermal
        + c.f_x1.norm_sqr()
        + c.f_y1.norm_sqr()
        + c.f_x2.norm_sqr()
        + c.f_y2.norm_sqr();
    num / c.b.norm_sqr()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumResult {
    pub omega: Vec<f64>,
    pub s_q: Vec<f64>,
    pub peaks: Vec<Peak>,
    pub params: LinearizedParams,
}

impl SpectrumResult {
    /// Re-run peak detection with another relative prominence.
    pub fn find_peaks(&self, prominence_frac: f64) -> Vec<Peak> {
        find_peaks(&self.omega, &self.s_q, prominence_frac)
    }
}

/// Evaluate the spectrum on a grid without checking dynamical stability.
/// For unstable parameters the result is a formal rational function, not
/// a stationary spectrum.
pub fn evaluate_spectrum(lp: &LinearizedParams, omega_grid: &[f64]) -> SpectrumResult {
    let s_q: Vec<f64> = omega_grid.iter().map(|&w| spectral_density_reduced(lp, w)).collect();
    let peaks = find_peaks(omega_grid, &s_q, DEFAULT_PROMINENCE_FRAC);
    SpectrumResult { omega: omega_grid.to_vec(), s_q, peaks, params: *lp }
}

/// Stationary displacement spectrum; refuses dynamically unstable parameters.
pub fn displacement_spectrum(lp: &LinearizedParams, omega_grid: &[f64]) -> Result<SpectrumResult> {
    lp.validate()?;
    let drift = drift_matrix(lp)?;
    if drift.spectral_abscissa >= 0.0 {
        return Err(Error::UnstableParameters { eigenvalue: drift.leading_eigenvalue });
    }
    Ok(evaluate_spectrum(lp, omega_grid))
}
