use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use trimode_core::{GridSpec, SweepSpec};

#[derive(Debug, Parser)]
#[command(name = "trimode", version, about = "Normal modes, squeezing and spectra of a two-cavity optomechanical system")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form excitation energies against the exact symplectic spectrum.
    Modes(SweepArgs),
    /// Ground-state quadrature variances along a coupling sweep.
    Squeeze(SweepArgs),
    /// Analytic displacement spectrum and its peaks.
    Spectrum(SpectrumArgs),
    /// Stochastic simulation, Welch PSD and comparison with the analytic spectrum.
    Simulate(SimulateArgs),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Modes(a) | Command::Squeeze(a) => &a.common,
            Command::Spectrum(a) => &a.common,
            Command::Simulate(a) => &a.common,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// Flat key-value parameter file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Named parameter set (fig2a ... fig4).
    #[arg(long)]
    pub preset: Option<String>,
    /// Inline parameter, repeatable: `--param Omega1=1.3`.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Re-run exactly what a previous sidecar records.
    #[arg(long, value_name = "META_JSON")]
    pub from_meta: Option<PathBuf>,
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Base name of the output files; defaults to the subcommand name.
    #[arg(long)]
    pub name: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// `axis=start:stop:n` with axis one of lambda, G1, G2.
    #[arg(long)]
    pub sweep: Option<SweepSpec>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub common: Common,
    /// `start:stop:n` frequency grid.
    #[arg(long)]
    pub grid: Option<GridSpec>,
    /// Evaluate the formal spectrum even when the drift matrix is unstable.
    #[arg(long)]
    pub allow_unstable: bool,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trajectories: Option<usize>,
    #[arg(long)]
    pub n_steps: Option<usize>,
    #[arg(long)]
    pub segment_len: Option<usize>,
    #[arg(long)]
    pub overlap: Option<f64>,
    /// Integration step; defaults to a fraction of the fastest period.
    #[arg(long)]
    pub dt: Option<f64>,
    /// Upper end of the band compared against the analytic spectrum.
    #[arg(long)]
    pub band_max: Option<f64>,
    /// Also write the first trajectory.
    #[arg(long)]
    pub trajectory: bool,
    /// Keep every n-th sample of the written trajectory.
    #[arg(long)]
    pub decimate: Option<usize>,
}
