//! Closed-form normal modes of the linearized Hamiltonian.
//!
//! Everything here is evaluated exactly as the closed forms are written,
//! including in regimes where they disagree with an exact diagonalization
//! (compare with [`crate::symplectic`]). The squared energies are kept so
//! that negative values (imaginary energies) stay representable.

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::LinearizedParams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RotationAngles {
    pub gamma1: f64,
    pub gamma2: f64,
    pub gamma3: f64,
    /// Momentum rotation; fixed at pi/4.
    pub beta_p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Phase {
    Normal,
    Superradiant,
    Unstable,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Normal => "normal",
            Phase::Superradiant => "superradiant",
            Phase::Unstable => "unstable",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PhaseLabel {
    pub phase: Phase,
    /// A sign test hit an exact zero.
    pub boundary: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NormalModeResult {
    pub angles: RotationAngles,
    pub eps_x2: f64,
    pub eps_y2: f64,
    pub eps_z2: f64,
    pub eps_p1: f64,
    pub eps_p2: f64,
    pub eps_x_final: Complex64,
    pub eps_y_final: Complex64,
    pub eps_z_final: Complex64,
    pub phase: PhaseLabel,
}

/// `0.5 * atan2(num, den)`, with the 0/0 case mapped to zero.
fn half_atan2(num: f64, den: f64) -> f64 {
    if num == 0.0 && den == 0.0 {
        0.0
    } else {
        0.5 * num.atan2(den)
    }
}

pub fn rotation_angles(lp: &LinearizedParams) -> RotationAngles {
    let (o1, o2, wm) = (lp.omega1, lp.omega2, lp.omega_m);
    RotationAngles {
        gamma1: half_atan2(2.0 * lp.lambda * (o1 * o2).sqrt(), o2 * o2 - o1 * o1),
        gamma2: half_atan2(4.0 * lp.coupling1 * (o1 * wm).sqrt(), o1 * o1 - wm * wm),
        gamma3: half_atan2(4.0 * lp.coupling2 * (o2 * wm).sqrt(), o2 * o2 - wm * wm),
        beta_p: FRAC_PI_4,
    }
}

/// The three splitting radicals shared by the energies and thresholds.
struct Radicals {
    /// optical 1 / mechanics
    s1m: f64,
    /// optical 2 / mechanics
    s2m: f64,
    /// optical 1 / optical 2
    s12: f64,
}

impl Radicals {
    fn new(lp: &LinearizedParams) -> Self {
        let (o1, o2, wm) = (lp.omega1, lp.omega2, lp.omega_m);
        let (g1, g2, l) = (lp.coupling1, lp.coupling2, lp.lambda);
        Self {
            s1m: ((o1 * o1 - wm * wm).powi(2) + 16.0 * g1 * g1 * o1 * wm).sqrt(),
            s2m: ((o2 * o2 - wm * wm).powi(2) + 16.0 * g2 * g2 * wm * o2).sqrt(),
            s12: ((o2 * o2 - o1 * o1).powi(2) + 4.0 * l * l * o1 * o2).sqrt(),
        }
    }
}

pub fn classify_phase(nm: &NormalModeResult) -> PhaseLabel {
    classify(nm.eps_x2, nm.eps_y2, nm.eps_z2, nm.eps_p1)
}

fn classify(eps_x2: f64, eps_y2: f64, eps_z2: f64, eps_p1: f64) -> PhaseLabel {
    let x_product = eps_x2 * eps_p1;
    if eps_p1 < 0.0 && eps_x2 < 0.0 {
        return PhaseLabel { phase: Phase::Unstable, boundary: false };
    }
    if x_product > 0.0 && eps_z2 > 0.0 && eps_y2 >= 0.0 {
        return PhaseLabel { phase: Phase::Normal, boundary: false };
    }
    let boundary = x_product == 0.0 || eps_z2 == 0.0;
    PhaseLabel { phase: Phase::Superradiant, boundary }
}

fn csqrt(v: f64) -> Complex64 {
    Complex64::new(v, 0.0).sqrt()
}

pub fn excitation_energies(lp: &LinearizedParams) -> Result<NormalModeResult> {
    lp.validate()?;
    let (o1, o2, wm) = (lp.omega1, lp.omega2, lp.omega_m);
    let r = Radicals::new(lp);
    let (o1s, o2s, wms) = (o1 * o1, o2 * o2, wm * wm);

    let eps_x2 = 0.5 * ((2.0 * o1s + o2s + wms) + (r.s1m - r.s12));
    let eps_y2 = 0.5 * ((o1s + 2.0 * o2s + wms) + (r.s12 + r.s2m));
    let eps_z2 = 0.5 * ((o1s + o2s + 2.0 * wms) - (r.s1m + r.s2m));
    let ratio = lp.lambda / (o1 * o2).sqrt();
    let eps_p1 = 1.0 - ratio;
    let eps_p2 = 1.0 + ratio;

    Ok(NormalModeResult {
        angles: rotation_angles(lp),
        eps_x2,
        eps_y2,
        eps_z2,
        eps_p1,
        eps_p2,
        eps_x_final: csqrt(eps_x2) * csqrt(eps_p1),
        eps_y_final: csqrt(eps_y2) * csqrt(eps_p2),
        eps_z_final: csqrt(eps_z2),
        phase: classify(eps_x2, eps_y2, eps_z2, eps_p1),
    })
}

/// `sqrt(Omega1 Omega2)`: where the momentum coefficient `eps_p1` vanishes.
pub fn critical_lambda(lp: &LinearizedParams) -> f64 {
    (lp.omega1 * lp.omega2).sqrt()
}

/// Coupling `lambda` above which `eps_x2` turns negative.
pub fn lambda_unstable(lp: &LinearizedParams) -> Result<f64> {
    lp.validate()?;
    let (o1, o2, wm) = (lp.omega1, lp.omega2, lp.omega_m);
    let r = Radicals::new(lp);
    let radicand = (2.0 * o1 * o1 + o2 * o2 + wm * wm + r.s1m).powi(2) - (o2 * o2 - o1 * o1).powi(2);
    if radicand < 0.0 {
        return Err(Error::ComplexThreshold { radicand });
    }
    Ok(radicand.sqrt() / (2.0 * (o1 * o2).sqrt()))
}

/// Coupling `G1` above which `eps_z2` turns negative.
pub fn g1_critical(lp: &LinearizedParams) -> Result<f64> {
    lp.validate()?;
    let (o1, o2, wm) = (lp.omega1, lp.omega2, lp.omega_m);
    let r = Radicals::new(lp);
    let radicand = (o1 * o1 + o2 * o2 + 2.0 * wm * wm - r.s2m).powi(2) - (o1 * o1 - wm * wm).powi(2);
    if radicand < 0.0 {
        return Err(Error::ComplexThreshold { radicand });
    }
    Ok(radicand.sqrt() / (4.0 * (o1 * wm).sqrt()))
}
