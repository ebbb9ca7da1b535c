//! Flat key-value run configuration and grid specifications.
//!
//! A config file is flat TOML. It holds either linearized parameters
//! (`Omega1`, `Omega2`, `G1`, `G2`, `lambda`, with optional `omega_m`,
//! damping rates and `T_dim`) or bare parameters (`omega1`, `omega2`, `g1`,
//! `g2`, `G_cross`, optional damping, `T_dim` and a mean-field starting
//! guess `alpha1_re` ... `beta_im`), never both. Run settings such as
//! `sweep = "lambda=0:1.2:241"` may sit alongside.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    linearize, solve_mean_fields, CouplingAxis, LinearizedParams, MeanFields, SystemParams, MEAN_FIELD_MAX_ITER,
};

/// Residual target of the mean-field solve behind a bare-parameter config.
pub const MEAN_FIELD_TOL: f64 = 1e-12;

/// `start:stop:n`, `n` evenly spaced points including both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub n: usize,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, n: usize) -> Result<Self> {
        let g = Self { start, stop, n };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |reason: String| Err(Error::Config(format!("grid {self}: {reason}")));
        if self.n == 0 {
            return bad("grid is empty".into());
        }
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return bad("bounds must be finite".into());
        }
        if self.n > 1 && self.stop <= self.start {
            return bad("grid must be strictly increasing".into());
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.n - 1) as f64;
        (0..self.n)
            .map(|k| if k + 1 == self.n { self.stop } else { self.start + k as f64 * step })
            .collect()
    }
}

impl fmt::Display for GridSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.n)
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts.as_slice() else {
            return Err(Error::Config(format!("expected start:stop:n, got {s:?}")));
        };
        let num = |t: &str| t.trim().parse::<f64>().map_err(|e| Error::Config(format!("{t:?}: {e}")));
        let n = n.trim().parse::<usize>().map_err(|e| Error::Config(format!("{n:?}: {e}")))?;
        Self::new(num(a)?, num(b)?, n)
    }
}

/// `axis=start:stop:n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axis: CouplingAxis,
    pub grid: GridSpec,
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}={}", self.axis.name(), self.grid)
    }
}

impl FromStr for SweepSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (axis, grid) = s
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected axis=start:stop:n, got {s:?}")))?;
        Ok(Self { axis: axis.trim().parse()?, grid: grid.parse()? })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ParamSource {
    Linearized(LinearizedParams),
    System { params: SystemParams, guess: MeanFields },
}

/// Linearized parameters together with how they were obtained.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Resolved {
    pub params: LinearizedParams,
    pub mean_fields: Option<MeanFields>,
    pub imaginary_coupling: bool,
}

impl ParamSource {
    pub fn resolve(&self) -> Result<Resolved> {
        match self {
            Self::Linearized(lp) => {
                lp.validate()?;
                Ok(Resolved { params: *lp, mean_fields: None, imaginary_coupling: false })
            }
            Self::System { params, guess } => {
                let (mf, _) = solve_mean_fields(params, guess, MEAN_FIELD_TOL, MEAN_FIELD_MAX_ITER)?;
                let lin = linearize(params, &mf)?;
                Ok(Resolved { params: lin.params, mean_fields: Some(mf), imaginary_coupling: lin.imaginary_coupling })
            }
        }
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    #[serde(rename = "Omega1")]
    big_omega1: Option<f64>,
    #[serde(rename = "Omega2")]
    big_omega2: Option<f64>,
    omega_m: Option<f64>,
    #[serde(rename = "G1")]
    big_g1: Option<f64>,
    #[serde(rename = "G2")]
    big_g2: Option<f64>,
    lambda: Option<f64>,

    omega1: Option<f64>,
    omega2: Option<f64>,
    g1: Option<f64>,
    g2: Option<f64>,
    #[serde(rename = "G_cross")]
    g_cross: Option<f64>,
    alpha1_re: Option<f64>,
    alpha1_im: Option<f64>,
    alpha2_re: Option<f64>,
    alpha2_im: Option<f64>,
    beta_re: Option<f64>,
    beta_im: Option<f64>,

    gamma_c1: Option<f64>,
    gamma_c2: Option<f64>,
    gamma_m: Option<f64>,
    #[serde(rename = "T_dim")]
    t_dim: Option<f64>,

    sweep: Option<String>,
    grid: Option<String>,
    seed: Option<u64>,
    trajectories: Option<usize>,
    n_steps: Option<usize>,
    segment_len: Option<usize>,
    dt: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigFile {
    pub source: ParamSource,
    pub sweep: Option<SweepSpec>,
    pub grid: Option<GridSpec>,
    pub seed: Option<u64>,
    pub trajectories: Option<usize>,
    pub n_steps: Option<usize>,
    pub segment_len: Option<usize>,
    pub dt: Option<f64>,
}

fn require(v: Option<f64>, name: &str) -> Result<f64> {
    v.ok_or_else(|| Error::Config(format!("missing key {name}")))
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    let linearized = [raw.big_omega1, raw.big_omega2, raw.omega_m, raw.big_g1, raw.big_g2, raw.lambda]
        .iter()
        .any(Option::is_some);
    let system = [
        raw.omega1, raw.omega2, raw.g1, raw.g2, raw.g_cross, raw.alpha1_re, raw.alpha1_im, raw.alpha2_re,
        raw.alpha2_im, raw.beta_re, raw.beta_im,
    ]
    .iter()
    .any(Option::is_some);
    let damping = (raw.gamma_c1.unwrap_or(0.0), raw.gamma_c2.unwrap_or(0.0), raw.gamma_m.unwrap_or(0.0));
    let t_dim = raw.t_dim.unwrap_or(0.0);
    let source = match (linearized, system) {
        (true, true) => {
            return Err(Error::Config("config mixes linearized and bare parameter keys".into()));
        }
        (false, false) => return Err(Error::Config("config holds no parameters".into())),
        (true, false) => ParamSource::Linearized(
            LinearizedParams::new(
                require(raw.big_omega1, "Omega1")?,
                require(raw.big_omega2, "Omega2")?,
                raw.omega_m.unwrap_or(1.0),
                require(raw.big_g1, "G1")?,
                require(raw.big_g2, "G2")?,
                require(raw.lambda, "lambda")?,
            )?
            .with_damping(damping.0, damping.1, damping.2)?
            .with_temperature(t_dim)?,
        ),
        (false, true) => {
            let c = |re: Option<f64>, im: Option<f64>| Complex64::new(re.unwrap_or(0.0), im.unwrap_or(0.0));
            ParamSource::System {
                params: SystemParams::new(
                    require(raw.omega1, "omega1")?,
                    require(raw.omega2, "omega2")?,
                    raw.g1.unwrap_or(0.0),
                    raw.g2.unwrap_or(0.0),
                    raw.g_cross.unwrap_or(0.0),
                    damping.0,
                    damping.1,
                    damping.2,
                    t_dim,
                )?,
                guess: MeanFields::new(
                    c(raw.alpha1_re, raw.alpha1_im),
                    c(raw.alpha2_re, raw.alpha2_im),
                    c(raw.beta_re, raw.beta_im),
                ),
            }
        }
    };
    Ok(ConfigFile {
        source,
        sweep: raw.sweep.as_deref().map(str::parse).transpose()?,
        grid: raw.grid.as_deref().map(str::parse).transpose()?,
        seed: raw.seed,
        trajectories: raw.trajectories,
        n_steps: raw.n_steps,
        segment_len: raw.segment_len,
        dt: raw.dt,
    })
}
