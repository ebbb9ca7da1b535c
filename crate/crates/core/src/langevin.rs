//! Time-domain integration of the linearized quadrature equations and
//! Welch estimation of the displacement power spectrum.
//!
//! State order is `(X1, Y1, X2, Y2, Q, P)`. The thermal force on `P` is
//! white with two-sided intensity `2 T_dim gamma_m / omega_m`, the
//! `w -> 0` value of the symmetrized kernel `w coth(w / 2T)`. For
//! `T_dim = 1e5` and `|w| <= 2.5` the kernel is flat to better than 1e-10
//! relative. The imaginary `X_in`/`Y_in` cross correlators are dropped
//! since they cancel in the symmetrized spectrum.

use std::f64::consts::PI;

use nalgebra::{Matrix6, Vector6};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::eigenvalues;
use crate::model::LinearizedParams;
use crate::peaks::{find_peaks, Peak};
use crate::spectrum::spectral_density_reduced;

/// Name of the generator recorded in run metadata.
pub const RNG_ALGORITHM: &str = "ChaCha8 (rand_chacha 0.9), seed_from_u64, one stream per trajectory";

/// Largest allowed `dt * max|A_ij|`.
pub const STEP_GUARD: f64 = 0.1;

/// Steps per period of the fastest eigenfrequency in the default step.
pub const STEPS_PER_PERIOD: f64 = 400.0;

/// State norm beyond which a run is declared divergent.
pub const OVERFLOW_GUARD: f64 = 1e150;

pub const STATE_LABELS: [&str; 6] = ["X1", "Y1", "X2", "Y2", "Q", "P"];
const Q: usize = 4;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DriftMatrix {
    pub a: Matrix6<f64>,
    /// Amplitude of the independent white input driving each state row.
    pub noise_map: [f64; 6],
    pub eigenvalues: Vec<Complex64>,
    pub spectral_abscissa: f64,
    pub leading_eigenvalue: Complex64,
}

impl DriftMatrix {
    pub fn is_stable(&self) -> bool {
        self.spectral_abscissa < 0.0
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a.amax()
    }

    /// `min(2 pi / (400 w_max), 0.1 / max|A_ij|)` with `w_max` the largest
    /// eigenvalue modulus.
    pub fn default_dt(&self) -> f64 {
        let w_max = self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let by_period = if w_max > 0.0 { 2.0 * PI / (STEPS_PER_PERIOD * w_max) } else { f64::INFINITY };
        by_period.min(STEP_GUARD / self.max_abs_entry())
    }
}

pub fn drift_matrix(lp: &LinearizedParams) -> Result<DriftMatrix> {
    let (d1, d2) = (lp.delta1(), lp.delta2());
    let (g1, g2, l, wm) = (lp.coupling1, lp.coupling2, lp.lambda, lp.omega_m);
    let (k1, k2, gm) = (lp.gamma_c1, lp.gamma_c2, lp.gamma_m);
    #[rustfmt::skip]
    let a = Matrix6::new(
        -k1 / 2.0, -d1,       0.0,       l,         0.0, 0.0,
        d1,        -k1 / 2.0, -l,        0.0,       g1,  0.0,
        0.0,       l,         -k2 / 2.0, -d2,       0.0, 0.0,
        -l,        0.0,       d2,        -k2 / 2.0, g2,  0.0,
        0.0,       0.0,       0.0,       0.0,       0.0, wm,
        g1,        0.0,       g2,        0.0,       -wm, -gm,
    );
    let thermal = (gm / wm * 2.0 * lp.t_dim).sqrt();
    let noise_map = [k1.sqrt(), k1.sqrt(), k2.sqrt(), k2.sqrt(), 0.0, thermal];
    let eigenvalues = eigenvalues(&a)?;
    let leading_eigenvalue = *eigenvalues.last().expect("six eigenvalues");
    Ok(DriftMatrix {
        a,
        noise_map,
        spectral_abscissa: leading_eigenvalue.re,
        leading_eigenvalue,
        eigenvalues,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOptions {
    pub dt: f64,
    pub n_steps: usize,
    pub seed: u64,
    pub stream: u64,
    pub initial: [f64; 6],
    pub noise: bool,
    /// Keep every `decimation`-th sample.
    pub decimation: usize,
}

impl SimOptions {
    pub fn new(dt: f64, n_steps: usize, seed: u64) -> Self {
        Self { dt, n_steps, seed, stream: 0, initial: [0.0; 6], noise: true, decimation: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    /// Spacing between stored samples.
    pub dt: f64,
    pub seed: u64,
    pub stream: u64,
    pub samples: Vec<[f64; 6]>,
    pub params: LinearizedParams,
}

impl Trajectory {
    pub fn component(&self, k: usize) -> Vec<f64> {
        self.samples.iter().map(|s| s[k]).collect()
    }

    pub fn q(&self) -> Vec<f64> {
        self.component(Q)
    }
}

fn check_step(drift: &DriftMatrix, opts: &SimOptions) -> Result<()> {
    if !(opts.dt.is_finite() && opts.dt > 0.0) {
        return Err(Error::InvalidStep(format!("dt must be positive and finite, got {}", opts.dt)));
    }
    let product = opts.dt * drift.max_abs_entry();
    if product > STEP_GUARD {
        return Err(Error::InvalidStep(format!("dt * max|A| = {product} exceeds {STEP_GUARD}")));
    }
    if opts.decimation == 0 {
        return Err(Error::InvalidStep("decimation must be at least 1".into()));
    }
    if !drift.is_stable() {
        return Err(Error::UnstableParameters { eigenvalue: drift.leading_eigenvalue });
    }
    Ok(())
}

/// Euler-Maruyama loop; `sink` sees the state after every kept step,
/// starting with the initial state.
fn integrate(drift: &DriftMatrix, opts: &SimOptions, mut sink: impl FnMut(&Vector6<f64>)) -> Result<()> {
    check_step(drift, opts)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    rng.set_stream(opts.stream);
    let step = drift.a * opts.dt + Matrix6::identity();
    let amp: Vector6<f64> = Vector6::from(drift.noise_map) * opts.dt.sqrt();
    let active: Vec<usize> = (0..6).filter(|&k| amp[k] != 0.0).collect();
    let mut x = Vector6::from(opts.initial);
    sink(&x);
    for n in 1..=opts.n_steps {
        x = step * x;
        if opts.noise {
            for &k in &active {
                let z: f64 = StandardNormal.sample(&mut rng);
                x[k] += amp[k] * z;
            }
        }
        let norm = x.norm();
        if norm.is_nan() || norm > OVERFLOW_GUARD {
            return Err(Error::Diverged { step: n });
        }
        if n % opts.decimation == 0 {
            sink(&x);
        }
    }
    Ok(())
}

pub fn simulate(lp: &LinearizedParams, dt: f64, n_steps: usize, seed: u64) -> Result<Trajectory> {
    simulate_with(lp, &SimOptions::new(dt, n_steps, seed))
}

pub fn simulate_with(lp: &LinearizedParams, opts: &SimOptions) -> Result<Trajectory> {
    let drift = drift_matrix(lp)?;
    let mut samples = Vec::with_capacity(opts.n_steps / opts.decimation.max(1) + 1);
    integrate(&drift, opts, |x| samples.push([x[0], x[1], x[2], x[3], x[4], x[5]]))?;
    Ok(Trajectory {
        dt: opts.dt * opts.decimation as f64,
        seed: opts.seed,
        stream: opts.stream,
        samples,
        params: *lp,
    })
}

/// Only the `Q` component, without storing the full state.
pub fn simulate_q(lp: &LinearizedParams, opts: &SimOptions) -> Result<Vec<f64>> {
    let drift = drift_matrix(lp)?;
    let mut q = Vec::with_capacity(opts.n_steps / opts.decimation.max(1) + 1);
    integrate(&drift, opts, |x| q.push(x[Q]))?;
    Ok(q)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Psd {
    pub omega: Vec<f64>,
    pub psd: Vec<f64>,
    /// Number of periodograms averaged.
    pub segments: usize,
}

impl Psd {
    pub fn bin_width(&self) -> f64 {
        if self.omega.len() > 1 {
            self.omega[1] - self.omega[0]
        } else {
            f64::NAN
        }
    }
}

fn hann(n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n).map(|k| 0.5 - 0.5 * (2.0 * PI * k as f64 / (n - 1) as f64).cos()).collect()
}

/// Welch average of Hann-windowed periodograms. Two-sided density
/// normalized so that `sum(psd) * d_omega / (2 pi)` over all bins is the
/// variance; returned on `omega >= 0`.
pub fn estimate_psd(samples: &[f64], dt: f64, segment_len: usize, overlap_frac: f64) -> Result<Psd> {
    if !(0.0..1.0).contains(&overlap_frac) {
        return Err(Error::InvalidParameter {
            name: "overlap_frac",
            reason: format!("must lie in [0, 1), got {overlap_frac}"),
        });
    }
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidStep(format!("sample spacing must be positive, got {dt}")));
    }
    if segment_len < 2 || samples.len() < segment_len {
        return Err(Error::TooShort { len: samples.len(), segment_len });
    }
    let hop = (segment_len - (overlap_frac * segment_len as f64).floor() as usize).max(1);
    let segments = 1 + (samples.len() - segment_len) / hop;
    let window = hann(segment_len);
    let norm = dt / window.iter().map(|w| w * w).sum::<f64>();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(segment_len);
    let half = segment_len / 2 + 1;
    let mut acc = vec![0.0; half];
    let mut buf = vec![Complex64::new(0.0, 0.0); segment_len];
    for s in 0..segments {
        let seg = &samples[s * hop..s * hop + segment_len];
        for ((b, &x), &w) in buf.iter_mut().zip(seg).zip(&window) {
            *b = Complex64::new(x * w, 0.0);
        }
        fft.process(&mut buf);
        for (a, b) in acc.iter_mut().zip(&buf) {
            *a += b.norm_sqr();
        }
    }
    let psd = acc.into_iter().map(|a| a * norm / segments as f64).collect();
    let d_omega = 2.0 * PI / (segment_len as f64 * dt);
    let omega = (0..half).map(|k| k as f64 * d_omega).collect();
    Ok(Psd { omega, psd, segments })
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleConfig {
    /// `None` selects [`DriftMatrix::default_dt`].
    pub dt: Option<f64>,
    pub n_steps: usize,
    pub seed: u64,
    pub trajectories: usize,
    pub segment_len: usize,
    pub overlap: f64,
}

impl EnsembleConfig {
    pub fn new(n_steps: usize, seed: u64, trajectories: usize) -> Self {
        Self { dt: None, n_steps, seed, trajectories, segment_len: 1 << 15, overlap: 0.5 }
    }
}

/// PSD of `Q` averaged over independent trajectories. Trajectory `k` uses
/// stream `k` of the seeded generator; averaging follows trajectory order,
/// so the result does not depend on thread scheduling.
pub fn simulate_psd_ensemble(lp: &LinearizedParams, cfg: &EnsembleConfig) -> Result<Psd> {
    if cfg.trajectories == 0 {
        return Err(Error::InvalidParameter { name: "trajectories", reason: "must be at least 1".into() });
    }
    let drift = drift_matrix(lp)?;
    if !drift.is_stable() {
        return Err(Error::UnstableParameters { eigenvalue: drift.leading_eigenvalue });
    }
    let dt = cfg.dt.unwrap_or_else(|| drift.default_dt());
    let psds: Vec<Result<Psd>> = (0..cfg.trajectories)
        .into_par_iter()
        .map(|k| {
            let opts = SimOptions { stream: k as u64, ..SimOptions::new(dt, cfg.n_steps, cfg.seed) };
            let mut q = Vec::with_capacity(cfg.n_steps + 1);
            integrate(&drift, &opts, |x| q.push(x[Q]))?;
            estimate_psd(&q, dt, cfg.segment_len, cfg.overlap)
        })
        .collect();
    let mut iter = psds.into_iter();
    let mut total = iter.next().expect("at least one trajectory")?;
    let mut segments = total.segments;
    for p in iter {
        let p = p?;
        segments += p.segments;
        for (a, b) in total.psd.iter_mut().zip(&p.psd) {
            *a += b;
        }
    }
    let n = cfg.trajectories as f64;
    total.psd.iter_mut().for_each(|v| *v /= n);
    total.segments = segments;
    Ok(total)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakMatch {
    pub analytic_omega: f64,
    pub simulated_omega: f64,
    pub bin_delta: i64,
    /// Simulated over analytic height, both normalized to unit band area.
    pub height_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PsdComparison {
    pub bin_width: f64,
    pub band_max: f64,
    pub analytic_peaks: Vec<Peak>,
    pub simulated_peaks: Vec<Peak>,
    pub matches: Vec<PeakMatch>,
}

impl PsdComparison {
    pub fn max_bin_delta(&self) -> Option<i64> {
        self.matches.iter().map(|m| m.bin_delta.abs()).max()
    }

    pub fn max_height_error(&self) -> Option<f64> {
        self.matches.iter().map(|m| (m.height_ratio - 1.0).abs()).reduce(f64::max)
    }

    /// Same peak count, every peak within `bins`, every normalized height
    /// within `rel` relative.
    pub fn agrees(&self, bins: i64, rel: f64) -> bool {
        !self.analytic_peaks.is_empty()
            && self.analytic_peaks.len() == self.simulated_peaks.len()
            && self.max_bin_delta().is_some_and(|d| d <= bins)
            && self.max_height_error().is_some_and(|e| e <= rel)
    }
}

/// Compare a simulated PSD with the analytic spectrum sampled on the same
/// bins over `(0, band_max]`.
pub fn compare_with_analytic(psd: &Psd, lp: &LinearizedParams, band_max: f64, prominence_frac: f64) -> PsdComparison {
    let idx: Vec<usize> = (0..psd.omega.len()).filter(|&k| psd.omega[k] > 0.0 && psd.omega[k] <= band_max).collect();
    let grid: Vec<f64> = idx.iter().map(|&k| psd.omega[k]).collect();
    let sim: Vec<f64> = idx.iter().map(|&k| psd.psd[k]).collect();
    let ana: Vec<f64> = grid.iter().map(|&w| spectral_density_reduced(lp, w)).collect();
    let area = |v: &[f64]| v.iter().sum::<f64>();
    let (sim_area, ana_area) = (area(&sim), area(&ana));
    let sim_n: Vec<f64> = sim.iter().map(|v| v / sim_area).collect();
    let ana_n: Vec<f64> = ana.iter().map(|v| v / ana_area).collect();
    let analytic_peaks = find_peaks(&grid, &ana_n, prominence_frac);
    let simulated_peaks = find_peaks(&grid, &sim_n, prominence_frac);
    let matches = analytic_peaks
        .iter()
        .filter_map(|a| {
            simulated_peaks.iter().min_by_key(|s| (s.index as i64 - a.index as i64).abs()).map(|s| PeakMatch {
                analytic_omega: a.omega_peak,
                simulated_omega: s.omega_peak,
                bin_delta: s.index as i64 - a.index as i64,
                height_ratio: s.height / a.height,
            })
        })
        .collect();
    PsdComparison { bin_width: psd.bin_width(), band_max, analytic_peaks, simulated_peaks, matches }
}
