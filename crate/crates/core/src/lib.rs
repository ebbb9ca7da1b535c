//! Linearized two-cavity optomechanics: normal modes, an exact symplectic
//! cross-check, ground-state squeezing, the displacement spectrum and a
//! stochastic time-domain oracle.
//!
//! Frequencies are in units of the bare mechanical frequency, `hbar = k_B = 1`.

pub mod config;
pub mod error;
pub mod langevin;
pub mod linalg;
pub mod model;
pub mod normal_modes;
pub mod peaks;
pub mod presets;
pub mod spectrum;
pub mod squeezing;
pub mod symplectic;

pub use config::{parse_config, ConfigFile, GridSpec, ParamSource, Resolved, SweepSpec};
pub use error::{Error, Result};
pub use langevin::{
    compare_with_analytic, drift_matrix, estimate_psd, simulate, simulate_psd_ensemble, simulate_with, DriftMatrix,
    EnsembleConfig, Psd, PsdComparison, SimOptions, Trajectory,
};
pub use model::{
    linearize, residual_mean_fields, solve_mean_fields, CouplingAxis, Linearization, LinearizedParams, MeanFields,
    SystemParams,
};
pub use normal_modes::{
    critical_lambda, excitation_energies, g1_critical, lambda_unstable, NormalModeResult, Phase, PhaseLabel,
};
pub use peaks::{find_peaks, Peak};
pub use spectrum::{coefficients, displacement_spectrum, evaluate_spectrum, SpectrumResult, TransferCoefficients};
pub use squeezing::{variance_sweep, variances, SweepPoint, VarianceSet};
pub use symplectic::{
    closed_form_discrepancy, ground_state_covariance, hessian, stability_boundary_lambda, symplectic_eigenvalues, QuadraticForm,
    SymplecticSpectrum,
};

pub use num_complex::Complex64;
