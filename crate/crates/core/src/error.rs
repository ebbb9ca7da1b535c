use num_complex::Complex64;
use thiserror::Error;

use crate::model::MeanFields;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("effective optical frequency must be positive (Omega1 = {omega1}, Omega2 = {omega2})")]
    NonPositiveEffectiveFrequency { omega1: f64, omega2: f64 },

    #[error("mean-field iteration did not converge after {iterations} iterations (residual {residual:e})")]
    NoConvergence {
        last: MeanFields,
        residual: f64,
        iterations: usize,
    },

    #[error("threshold radicand is negative ({radicand:e}); threshold is complex")]
    ComplexThreshold { radicand: f64 },

    #[error("eigen-solver failed: {0}")]
    NumericalFailure(String),

    #[error("quadratic form is not positive definite (min eigenvalue {min_eig:e})")]
    NotPositiveDefinite { min_eig: f64 },

    #[error("no sign change of the bracketed function on [{lo}, {hi}]")]
    NoSignChange { lo: f64, hi: f64 },

    #[error("parameters lie outside the normal phase")]
    OutsideNormalPhase,

    #[error("drift matrix is unstable: eigenvalue {eigenvalue} has positive real part")]
    UnstableParameters { eigenvalue: Complex64 },

    #[error("invalid integration step: {0}")]
    InvalidStep(String),

    #[error("trajectory diverged at step {step}")]
    Diverged { step: usize },

    #[error("record too short: {len} samples for segment length {segment_len}")]
    TooShort { len: usize, segment_len: usize },

    #[error("config error: {0}")]
    Config(String),
}
