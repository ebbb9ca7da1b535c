//! Quadrature variances of the original modes in the ground state of the
//! closed-form normal modes.
//!
//! The closed forms are evaluated as written. They are not guaranteed to be
//! positive, to respect the uncertainty bound, or to be symmetric under the
//! exchange of the two optical modes; the exact counterpart is
//! [`crate::symplectic::ground_state_covariance`].

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{CouplingAxis, LinearizedParams};
use crate::normal_modes::{excitation_energies, Phase};

/// Coherent-state reference variance.
pub const COHERENT_VARIANCE: f64 = 0.5;

/// Denominators below this are treated as divergent.
pub const DIVERGENCE_EPS: f64 = 1e-12;

/// A normal-mode quantity that appears in a variance denominator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Denominator {
    EpsX,
    EpsY,
    EpsZ,
    SqrtEpsP1,
    SqrtEpsP2,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Squeezed {
    pub x: bool,
    pub y: bool,
    pub z: bool,
    pub px: bool,
    pub py: bool,
    pub pz: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VarianceSet {
    pub var_x: f64,
    pub var_y: f64,
    pub var_z: f64,
    pub var_px: f64,
    pub var_py: f64,
    pub var_pz: f64,
    pub squeezed: Squeezed,
    /// Denominators that fell below [`DIVERGENCE_EPS`]; variances that
    /// contain them are `+inf`.
    pub divergent: Vec<Denominator>,
}

impl VarianceSet {
    pub fn as_array(&self) -> [f64; 6] {
        [self.var_x, self.var_y, self.var_z, self.var_px, self.var_py, self.var_pz]
    }
}

/// One weighted term `weight / den * (num)` of a variance bracket.
fn term(weight: f64, den: (f64, Denominator), num: f64, divergent: &mut Vec<Denominator>) -> f64 {
    if den.0 < DIVERGENCE_EPS {
        if !divergent.contains(&den.1) {
            divergent.push(den.1);
        }
        return f64::INFINITY;
    }
    weight / den.0 * num
}

fn finite_or_inf(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

pub fn variances(lp: &LinearizedParams) -> Result<VarianceSet> {
    let nm = excitation_energies(lp)?;
    let outside = nm.phase.phase != Phase::Normal
        || nm.phase.boundary
        || nm.eps_x2 <= 0.0
        || nm.eps_y2 < 0.0
        || nm.eps_z2 <= 0.0
        || nm.eps_p1 <= 0.0
        || nm.eps_p2 <= 0.0;
    if outside {
        return Err(Error::OutsideNormalPhase);
    }

    let (o1, o2, wm) = (lp.omega1, lp.omega2, lp.omega_m);
    let (ex, ey, ez) = (nm.eps_x2.sqrt(), nm.eps_y2.sqrt(), nm.eps_z2.sqrt());
    let (r1, r2) = (nm.eps_p1.sqrt(), nm.eps_p2.sqrt());
    let a = nm.angles;
    let (c1, c2, c3) = (a.gamma1.cos(), a.gamma2.cos(), a.gamma3.cos());
    let (s1, s2, s3) = (a.gamma1.sin(), a.gamma2.sin(), a.gamma3.sin());

    // mode weights: rows are (x, y, z), columns are the normal modes (1, 2, 3)
    let w = [
        [(c1 + c2).powi(2), s1 * s1, s2 * s2],
        [s1 * s1, (c1 + c3).powi(2), s3 * s3],
        [s2 * s2, s3 * s3, (c2 + c3).powi(2)],
    ];
    let freq = [o1, o2, wm];

    let mut divergent = Vec::new();
    let mut position = [0.0; 3];
    let mut momentum = [0.0; 3];
    for k in 0..3 {
        let f = freq[k];
        let bracket = 1.0
            + term(w[k][0], (ex, Denominator::EpsX), r1 * f - ex, &mut divergent)
            + term(w[k][1], (ey, Denominator::EpsY), r2 * f - ey, &mut divergent)
            + term(w[k][2], (ez, Denominator::EpsZ), f - ez, &mut divergent);
        position[k] = finite_or_inf(bracket / (2.0 * f));

        let bracket = 1.0
            + term(w[k][0], (r1, Denominator::SqrtEpsP1), (ex - r1 * f) / f, &mut divergent)
            + term(w[k][1], (r2, Denominator::SqrtEpsP2), (ey - r2 * f) / f, &mut divergent)
            + w[k][2] / f * (ez - f);
        momentum[k] = finite_or_inf(f / 2.0 * bracket);
    }

    let sq = |v: f64| v < COHERENT_VARIANCE;
    Ok(VarianceSet {
        var_x: position[0],
        var_y: position[1],
        var_z: position[2],
        var_px: momentum[0],
        var_py: momentum[1],
        var_pz: momentum[2],
        squeezed: Squeezed {
            x: sq(position[0]),
            y: sq(position[1]),
            z: sq(position[2]),
            px: sq(momentum[0]),
            py: sq(momentum[1]),
            pz: sq(momentum[2]),
        },
        divergent,
    })
}

#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub coupling: f64,
    pub result: Result<VarianceSet>,
}

/// Evaluate [`variances`] along one coupling axis. Points outside the normal
/// phase carry their error instead of aborting the sweep.
pub fn variance_sweep(lp_base: &LinearizedParams, which: CouplingAxis, grid: &[f64]) -> Vec<SweepPoint> {
    grid.iter()
        .map(|&v| SweepPoint { coupling: v, result: variances(&lp_base.with_coupling(which, v)) })
        .collect()
}
