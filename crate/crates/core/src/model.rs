//! Physical parameters, the mean-field fixed point, and the linearization
//! about it.
//!
//! Units: `hbar = k_B = 1`, every frequency and rate is measured in units of
//! the bare mechanical frequency (so `omega_m == 1.0` for [`SystemParams`]),
//! and temperature is stored as `k_B T / (hbar omega_m)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bare mechanical frequency in internal units.
pub const OMEGA_M: f64 = 1.0;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Imaginary parts of the linearized couplings above this fraction of their
/// modulus raise [`Linearization::imaginary_coupling`].
pub const IMAG_COUPLING_TOL: f64 = 1e-12;

/// Damping factor of the mean-field fixed-point iteration.
pub const MEAN_FIELD_DAMPING: f64 = 0.5;
pub const MEAN_FIELD_MAX_ITER: usize = 10_000;

/// Bare model: two optical modes, one mechanical mode, and their couplings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    pub omega1: f64,
    pub omega2: f64,
    pub g1: f64,
    pub g2: f64,
    /// Cross-mode coupling `G`.
    #[serde(rename = "G_cross")]
    pub g_cross: f64,
    pub gamma_c1: f64,
    pub gamma_c2: f64,
    pub gamma_m: f64,
    /// `k_B T / (hbar omega_m)`.
    #[serde(rename = "T_dim")]
    pub t_dim: f64,
}

impl SystemParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega1: f64,
        omega2: f64,
        g1: f64,
        g2: f64,
        g_cross: f64,
        gamma_c1: f64,
        gamma_c2: f64,
        gamma_m: f64,
        t_dim: f64,
    ) -> Result<Self> {
        let p = Self { omega1, omega2, g1, g2, g_cross, gamma_c1, gamma_c2, gamma_m, t_dim };
        p.validate()?;
        Ok(p)
    }

    /// Decoupled, undamped, zero-temperature model with the given optical
    /// frequencies.
    pub fn bare(omega1: f64, omega2: f64) -> Result<Self> {
        Self::new(omega1, omega2, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    }

    pub fn omega_m(&self) -> f64 {
        OMEGA_M
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in self.named_fields() {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("{v} is not finite") });
            }
        }
        positive("omega1", self.omega1)?;
        positive("omega2", self.omega2)?;
        nonnegative("gamma_c1", self.gamma_c1)?;
        nonnegative("gamma_c2", self.gamma_c2)?;
        nonnegative("gamma_m", self.gamma_m)?;
        nonnegative("T_dim", self.t_dim)?;
        Ok(())
    }

    fn named_fields(&self) -> [(&'static str, f64); 9] {
        [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("g1", self.g1),
            ("g2", self.g2),
            ("G_cross", self.g_cross),
            ("gamma_c1", self.gamma_c1),
            ("gamma_c2", self.gamma_c2),
            ("gamma_m", self.gamma_m),
            ("T_dim", self.t_dim),
        ]
    }
}

/// Steady-state amplitudes of the two cavity fields and the mechanics.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct MeanFields {
    pub alpha1: Complex64,
    pub alpha2: Complex64,
    pub beta: Complex64,
}

impl MeanFields {
    pub const ZERO: Self = Self {
        alpha1: Complex64::new(0.0, 0.0),
        alpha2: Complex64::new(0.0, 0.0),
        beta: Complex64::new(0.0, 0.0),
    };

    pub fn new(alpha1: Complex64, alpha2: Complex64, beta: Complex64) -> Self {
        Self { alpha1, alpha2, beta }
    }

    fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.alpha1 - other.alpha1)
            .norm()
            .max((self.alpha2 - other.alpha2).norm())
            .max((self.beta - other.beta).norm())
    }
}

/// Parameters of the quadratic fluctuation Hamiltonian and its damping.
///
/// The detunings are not stored: `delta1() == -omega1` and
/// `delta2() == -omega2` hold by construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinearizedParams {
    /// Effective optical frequency `Omega1`.
    #[serde(rename = "Omega1")]
    pub omega1: f64,
    #[serde(rename = "Omega2")]
    pub omega2: f64,
    pub omega_m: f64,
    /// Linearized optomechanical coupling `G1`.
    #[serde(rename = "G1")]
    pub coupling1: f64,
    #[serde(rename = "G2")]
    pub coupling2: f64,
    /// Optical-optical coupling.
    pub lambda: f64,
    pub gamma_c1: f64,
    pub gamma_c2: f64,
    pub gamma_m: f64,
    #[serde(rename = "T_dim")]
    pub t_dim: f64,
}

impl LinearizedParams {
    /// Lossless, zero-temperature parameters.
    pub fn new(
        omega1: f64,
        omega2: f64,
        omega_m: f64,
        coupling1: f64,
        coupling2: f64,
        lambda: f64,
    ) -> Result<Self> {
        let lp = Self {
            omega1,
            omega2,
            omega_m,
            coupling1,
            coupling2,
            lambda,
            gamma_c1: 0.0,
            gamma_c2: 0.0,
            gamma_m: 0.0,
            t_dim: 0.0,
        };
        lp.validate()?;
        Ok(lp)
    }

    pub fn with_damping(mut self, gamma_c1: f64, gamma_c2: f64, gamma_m: f64) -> Result<Self> {
        self.gamma_c1 = gamma_c1;
        self.gamma_c2 = gamma_c2;
        self.gamma_m = gamma_m;
        self.validate()?;
        Ok(self)
    }

    pub fn with_temperature(mut self, t_dim: f64) -> Result<Self> {
        self.t_dim = t_dim;
        self.validate()?;
        Ok(self)
    }

    pub fn delta1(&self) -> f64 {
        -self.omega1
    }

    pub fn delta2(&self) -> f64 {
        -self.omega2
    }

    pub fn validate(&self) -> Result<()> {
        let fields = [
            ("Omega1", self.omega1),
            ("Omega2", self.omega2),
            ("omega_m", self.omega_m),
            ("G1", self.coupling1),
            ("G2", self.coupling2),
            ("lambda", self.lambda),
            ("gamma_c1", self.gamma_c1),
            ("gamma_c2", self.gamma_c2),
            ("gamma_m", self.gamma_m),
            ("T_dim", self.t_dim),
        ];
        for (name, v) in fields {
            if !v.is_finite() {
                return Err(Error::InvalidParameter { name, reason: format!("{v} is not finite") });
            }
        }
        if self.omega1 <= 0.0 || self.omega2 <= 0.0 {
            return Err(Error::NonPositiveEffectiveFrequency { omega1: self.omega1, omega2: self.omega2 });
        }
        positive("omega_m", self.omega_m)?;
        nonnegative("gamma_c1", self.gamma_c1)?;
        nonnegative("gamma_c2", self.gamma_c2)?;
        nonnegative("gamma_m", self.gamma_m)?;
        nonnegative("T_dim", self.t_dim)?;
        Ok(())
    }

    /// Copy with one coupling replaced; used by sweeps.
    pub fn with_coupling(mut self, axis: CouplingAxis, value: f64) -> Self {
        match axis {
            CouplingAxis::Lambda => self.lambda = value,
            CouplingAxis::G1 => self.coupling1 = value,
            CouplingAxis::G2 => self.coupling2 = value,
        }
        self
    }

    pub fn coupling(&self, axis: CouplingAxis) -> f64 {
        match axis {
            CouplingAxis::Lambda => self.lambda,
            CouplingAxis::G1 => self.coupling1,
            CouplingAxis::G2 => self.coupling2,
        }
    }

    /// Relabel optical modes 1 and 2.
    pub fn swapped(&self) -> Self {
        Self {
            omega1: self.omega2,
            omega2: self.omega1,
            coupling1: self.coupling2,
            coupling2: self.coupling1,
            gamma_c1: self.gamma_c2,
            gamma_c2: self.gamma_c1,
            ..*self
        }
    }
}

/// Coupling that a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CouplingAxis {
    #[serde(rename = "lambda")]
    Lambda,
    G1,
    G2,
}

impl CouplingAxis {
    pub fn name(self) -> &'static str {
        match self {
            CouplingAxis::Lambda => "lambda",
            CouplingAxis::G1 => "G1",
            CouplingAxis::G2 => "G2",
        }
    }
}

impl std::str::FromStr for CouplingAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lambda" => Ok(CouplingAxis::Lambda),
            "G1" => Ok(CouplingAxis::G1),
            "G2" => Ok(CouplingAxis::G2),
            other => Err(Error::Config(format!("unknown sweep axis `{other}` (expected lambda, G1 or G2)"))),
        }
    }
}

/// Output of [`linearize`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Linearization {
    pub params: LinearizedParams,
    /// Set when an imaginary part was discarded from `G1`, `G2` or `lambda`.
    pub imaginary_coupling: bool,
}

/// Expand the bare model about `mf`, keeping bilinear terms.
///
/// `beta + beta^dagger` is evaluated as `2 Re(beta)`; the couplings are
/// taken as real.
pub fn linearize(params: &SystemParams, mf: &MeanFields) -> Result<Linearization> {
    params.validate()?;
    let beta_sum = 2.0 * mf.beta.re;
    let omega1 = params.omega1 - beta_sum * params.g1;
    let omega2 = params.omega2 - beta_sum * params.g2;
    let c1 = params.g1 * mf.alpha1 - params.g_cross * mf.alpha2;
    let c2 = params.g2 * mf.alpha2 - params.g_cross * mf.alpha1;
    let lambda = 2.0 * params.g_cross * mf.beta;

    let imaginary_coupling = [c1, c2, lambda]
        .iter()
        .any(|z| z.im.abs() > IMAG_COUPLING_TOL * z.norm());

    let lp = LinearizedParams {
        omega1,
        omega2,
        omega_m: params.omega_m(),
        coupling1: c1.re,
        coupling2: c2.re,
        lambda: lambda.re,
        gamma_c1: params.gamma_c1,
        gamma_c2: params.gamma_c2,
        gamma_m: params.gamma_m,
        t_dim: params.t_dim,
    };
    lp.validate()?;
    Ok(Linearization { params: lp, imaginary_coupling })
}

/// Defects of the three steady-state equations, written without division.
fn defects(p: &SystemParams, mf: &MeanFields) -> [Complex64; 3] {
    let x = 2.0 * mf.beta.re;
    let d1 = mf.alpha1 * (I * p.g1 * x - (I * p.omega1 + p.gamma_c1 / 2.0)) - I * p.g_cross * mf.alpha2 * x;
    let d2 = mf.alpha2 * (I * p.g2 * x - (I * p.omega2 + p.gamma_c2 / 2.0)) - I * p.g_cross * mf.alpha1 * x;
    let source = I * p.g1 * mf.alpha1.norm_sqr() + I * p.g2 * mf.alpha2.norm_sqr()
        - I * p.g_cross * (mf.alpha1 * mf.alpha2.conj() + mf.alpha2 * mf.alpha1.conj());
    let d3 = mf.beta * (I * p.omega_m() + p.gamma_m) - source;
    [d1, d2, d3]
}

/// Max-norm of the steady-state defects; zero iff `mf` is an exact fixed point.
pub fn residual_mean_fields(params: &SystemParams, mf: &MeanFields) -> f64 {
    defects(params, mf).iter().map(|d| d.norm()).fold(0.0, f64::max)
}

fn fixed_point_map(p: &SystemParams, mf: &MeanFields) -> MeanFields {
    let x = 2.0 * mf.beta.re;
    let alpha1 = I * p.g_cross * mf.alpha2 * x / (I * p.g1 * x - (I * p.omega1 + p.gamma_c1 / 2.0));
    let alpha2 = I * p.g_cross * mf.alpha1 * x / (I * p.g2 * x - (I * p.omega2 + p.gamma_c2 / 2.0));
    let source = I * p.g1 * mf.alpha1.norm_sqr() + I * p.g2 * mf.alpha2.norm_sqr()
        - I * p.g_cross * (mf.alpha1 * mf.alpha2.conj() + mf.alpha2 * mf.alpha1.conj());
    let beta = source / (I * p.omega_m() + p.gamma_m);
    MeanFields { alpha1, alpha2, beta }
}

/// Damped fixed-point iteration of the steady-state equations.
///
/// Returns the converged fields and their residual. On failure the last
/// iterate is carried by [`Error::NoConvergence`].
pub fn solve_mean_fields(
    params: &SystemParams,
    initial_guess: &MeanFields,
    tol: f64,
    max_iter: usize,
) -> Result<(MeanFields, f64)> {
    params.validate()?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter { name: "tol", reason: format!("{tol} must be positive") });
    }
    if max_iter == 0 {
        return Err(Error::InvalidParameter { name: "max_iter", reason: "must be at least 1".into() });
    }

    let mut mf = *initial_guess;
    let mut residual = residual_mean_fields(params, &mf);
    for _ in 0..max_iter {
        if residual <= tol {
            return Ok((mf, residual));
        }
        let target = fixed_point_map(params, &mf);
        let next = MeanFields {
            alpha1: MEAN_FIELD_DAMPING * mf.alpha1 + (1.0 - MEAN_FIELD_DAMPING) * target.alpha1,
            alpha2: MEAN_FIELD_DAMPING * mf.alpha2 + (1.0 - MEAN_FIELD_DAMPING) * target.alpha2,
            beta: MEAN_FIELD_DAMPING * mf.beta + (1.0 - MEAN_FIELD_DAMPING) * target.beta,
        };
        if !next.max_abs_diff(&MeanFields::ZERO).is_finite() {
            break;
        }
        mf = next;
        residual = residual_mean_fields(params, &mf);
    }
    if residual <= tol {
        return Ok((mf, residual));
    }
    Err(Error::NoConvergence { last: mf, residual, iterations: max_iter })
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("{v} must be positive") })
    }
}

fn nonnegative(name: &'static str, v: f64) -> Result<()> {
    if v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, reason: format!("{v} must be non-negative") })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn coupled() -> SystemParams {
        SystemParams::new(1.3, 1.5, 0.2, 0.3, 1.5, 0.2, 0.6, 1e-4, 1e5).unwrap()
    }

    #[test]
    fn zero_couplings_leave_bare_frequency() {
        let p = SystemParams::new(1.3, 1.5, 0.0, 0.0, 0.0, 0.2, 0.6, 1e-4, 1.0).unwrap();
        let mf = MeanFields::new(c(0.0, 0.0), c(0.0, 0.0), c(0.06, 0.0));
        let lin = linearize(&p, &mf).unwrap();
        assert_eq!(lin.params.omega1, 1.3);
        assert_eq!(lin.params.lambda, 0.0);
    }

    #[test]
    fn lambda_from_cross_coupling_and_beta() {
        let p = SystemParams::new(1.3, 1.5, 0.0, 0.0, 1.5, 0.2, 0.6, 1e-4, 1e5).unwrap();
        let mf = MeanFields::new(c(0.0, 0.0), c(0.0, 0.0), c(0.06, 0.0));
        let lin = linearize(&p, &mf).unwrap();
        assert!((lin.params.lambda - 0.18).abs() < 1e-15);
    }

    #[test]
    fn symmetric_cancellation_of_g1() {
        let p = SystemParams::new(1.3, 1.5, 0.5, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0).unwrap();
        let mf = MeanFields::new(c(2.0, 0.0), c(2.0, 0.0), c(0.0, 0.0));
        let lin = linearize(&p, &mf).unwrap();
        assert_eq!(lin.params.coupling1, 0.0);
        assert!(!lin.imaginary_coupling);
    }

    #[test]
    fn detunings_follow_effective_frequencies() {
        let lin = linearize(&coupled(), &MeanFields::new(c(0.1, 0.0), c(0.2, 0.0), c(0.05, 0.0))).unwrap();
        assert_eq!(lin.params.delta1(), -lin.params.omega1);
        assert_eq!(lin.params.delta2(), -lin.params.omega2);
    }

    #[test]
    fn imaginary_coupling_is_flagged() {
        let mf = MeanFields::new(c(0.1, 0.3), c(0.2, 0.0), c(0.05, 0.0));
        let lin = linearize(&coupled(), &mf).unwrap();
        assert!(lin.imaginary_coupling);
    }

    #[test]
    fn non_positive_effective_frequency_is_an_error() {
        // Omega1 = 1.3 - 2 * 1.0 * 0.7 < 0
        let p = SystemParams::new(1.3, 1.5, 0.7, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
        let mf = MeanFields::new(c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0));
        assert!(matches!(linearize(&p, &mf), Err(Error::NonPositiveEffectiveFrequency { .. })));
    }

    #[test]
    fn invalid_system_params_rejected() {
        assert!(SystemParams::new(0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 0.0, 0.0, 0.0, -0.1, 0.0, 0.0, 0.0).is_err());
        assert!(SystemParams::new(1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, -1.0).is_err());
    }

    #[test]
    fn zero_guess_is_exact_fixed_point() {
        let (mf, res) = solve_mean_fields(&coupled(), &MeanFields::ZERO, 1e-12, 10).unwrap();
        assert_eq!(mf, MeanFields::ZERO);
        assert_eq!(res, 0.0);
    }

    #[test]
    fn decoupled_residual_matches_hand_evaluation() {
        let p = SystemParams::new(1.3, 1.5, 0.0, 0.0, 0.0, 0.2, 0.6, 1e-4, 1.0).unwrap();
        let mf = MeanFields::new(c(0.3, -0.4), c(1.0, 0.0), c(0.0, 2.0));
        // |alpha1| |i omega1 + gamma_c1/2|, |alpha2| |i omega2 + gamma_c2/2|, |beta| |i + gamma_m|
        let d1 = 0.5 * (1.3f64.powi(2) + 0.1f64.powi(2)).sqrt();
        let d2 = 1.0 * (1.5f64.powi(2) + 0.3f64.powi(2)).sqrt();
        let d3 = 2.0 * (1.0f64 + 1e-8).sqrt();
        let expected = d1.max(d2).max(d3);
        assert!((residual_mean_fields(&p, &mf) - expected).abs() < 1e-14);
    }

    #[test]
    fn candidate_fields_checked_by_direct_substitution() {
        // Independent evaluation of the three steady-state equations as
        // printed, in "lhs - rhs" form with each denominator cleared.
        let p = coupled();
        let mf = MeanFields::new(c(0.11, -0.02), c(-0.05, 0.07), c(0.03, 0.01));
        let x = mf.beta + mf.beta.conj();
        let i = c(0.0, 1.0);
        let den1 = i * p.g1 * x - (i * p.omega1 + p.gamma_c1 / 2.0);
        let den2 = i * p.g2 * x - (i * p.omega2 + p.gamma_c2 / 2.0);
        let e1 = (mf.alpha1 - i * p.g_cross * mf.alpha2 * x / den1) * den1;
        let e2 = (mf.alpha2 - i * p.g_cross * mf.alpha1 * x / den2) * den2;
        let num3 = i * p.g1 * mf.alpha1.conj() * mf.alpha1 + i * p.g2 * mf.alpha2.conj() * mf.alpha2
            - i * p.g_cross * (mf.alpha1 * mf.alpha2.conj() + mf.alpha2 * mf.alpha1.conj());
        let den3 = i * 1.0 + p.gamma_m;
        let e3 = (mf.beta - num3 / den3) * den3;
        let expected = e1.norm().max(e2.norm()).max(e3.norm());
        assert!((residual_mean_fields(&p, &mf) - expected).abs() < 1e-15);
    }

    #[test]
    fn solver_output_meets_tolerance_and_is_deterministic() {
        let p = coupled();
        let guess = MeanFields::new(c(0.01, 0.02), c(-0.01, 0.0), c(0.005, -0.002));
        let (a, ra) = solve_mean_fields(&p, &guess, 1e-10, MEAN_FIELD_MAX_ITER).unwrap();
        let (b, rb) = solve_mean_fields(&p, &guess, 1e-10, MEAN_FIELD_MAX_ITER).unwrap();
        assert!(ra <= 1e-10);
        assert_eq!(ra.to_bits(), rb.to_bits());
        assert_eq!(a, b);
        assert!((residual_mean_fields(&p, &a) - ra).abs() == 0.0);
    }

    #[test]
    fn no_convergence_returns_last_iterate() {
        let p = coupled();
        let guess = MeanFields::new(c(0.5, 0.0), c(0.5, 0.0), c(0.2, 0.0));
        match solve_mean_fields(&p, &guess, 1e-300, 2) {
            Err(Error::NoConvergence { residual, iterations, last }) => {
                assert_eq!(iterations, 2);
                assert!(residual > 0.0);
                assert!((residual_mean_fields(&p, &last) - residual).abs() == 0.0);
            }
            other => panic!("expected NoConvergence, got {other:?}"),
        }
    }

    #[test]
    fn solver_rejects_bad_controls() {
        assert!(solve_mean_fields(&coupled(), &MeanFields::ZERO, 0.0, 10).is_err());
        assert!(solve_mean_fields(&coupled(), &MeanFields::ZERO, 1e-10, 0).is_err());
    }

    proptest! {
        #[test]
        fn zero_fields_have_zero_residual(
            w1 in 0.1f64..3.0, w2 in 0.1f64..3.0, g1 in -1.0f64..1.0, g2 in -1.0f64..1.0,
            gx in -2.0f64..2.0, k1 in 0.0f64..1.0, k2 in 0.0f64..1.0, gm in 0.0f64..0.1,
        ) {
            let p = SystemParams::new(w1, w2, g1, g2, gx, k1, k2, gm, 1.0).unwrap();
            prop_assert_eq!(residual_mean_fields(&p, &MeanFields::ZERO), 0.0);
        }

        #[test]
        fn effective_frequency_linear_in_beta(g1 in -0.5f64..0.5, beta in -0.5f64..0.5) {
            let p = SystemParams::new(2.0, 2.0, g1, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0).unwrap();
            let mf = MeanFields::new(c(0.0, 0.0), c(0.0, 0.0), c(beta, 0.0));
            let lin = linearize(&p, &mf).unwrap();
            prop_assert!((lin.params.omega1 - 2.0 - (-2.0 * g1 * beta)).abs() < 1e-14);
        }

        #[test]
        fn zero_fields_linearize_to_bare_model(
            w1 in 0.1f64..3.0, w2 in 0.1f64..3.0, g1 in -1.0f64..1.0, gx in -2.0f64..2.0,
        ) {
            let p = SystemParams::new(w1, w2, g1, 0.3, gx, 0.1, 0.1, 0.0, 0.0).unwrap();
            let lp = linearize(&p, &MeanFields::ZERO).unwrap().params;
            prop_assert_eq!(lp.coupling1, 0.0);
            prop_assert_eq!(lp.coupling2, 0.0);
            prop_assert_eq!(lp.lambda, 0.0);
            prop_assert_eq!(lp.omega1, w1);
            prop_assert_eq!(lp.omega2, w2);
        }
    }
}
