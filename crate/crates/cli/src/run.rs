use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use trimode_core::langevin::{self, RNG_ALGORITHM, STATE_LABELS};
use trimode_core::spectrum::DEFAULT_PROMINENCE_FRAC;
use trimode_core::squeezing::Squeezed;
use trimode_core::{
    closed_form_discrepancy, compare_with_analytic, critical_lambda, displacement_spectrum, drift_matrix,
    evaluate_spectrum, excitation_energies, g1_critical, hessian, lambda_unstable, parse_config, presets,
    simulate_psd_ensemble, simulate_with, symplectic_eigenvalues, variance_sweep, EnsembleConfig, Error, GridSpec,
    LinearizedParams, MeanFields, SimOptions, SweepSpec,
};

use crate::args::{Command, Common};

pub const TOOL: &str = "trimode";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub const DEFAULT_SPECTRUM_GRID: GridSpec = GridSpec { start: 0.0, stop: 2.5, n: 10_000 };
pub const DEFAULT_SEED: u64 = 0;
pub const DEFAULT_TRAJECTORIES: usize = 16;
pub const DEFAULT_N_STEPS: usize = 1 << 20;
pub const DEFAULT_SEGMENT_LEN: usize = 1 << 15;
pub const DEFAULT_OVERLAP: f64 = 0.5;
pub const DEFAULT_BAND_MAX: f64 = 2.5;
/// Peak-position and normalized-height tolerances of the comparison report.
pub const REPORT_BINS: i64 = 2;
pub const REPORT_HEIGHT_REL: f64 = 0.2;

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Unstable(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numerical(_) => 3,
            CliError::Unstable(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Unstable(m) => write!(f, "unstable parameters: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::UnstableParameters { .. } => CliError::Unstable(msg),
            Error::InvalidParameter { .. }
            | Error::NonPositiveEffectiveFrequency { .. }
            | Error::InvalidStep(_)
            | Error::TooShort { .. }
            | Error::Config(_) => CliError::Config(msg),
            _ => CliError::Numerical(msg),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Where the parameters came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceInfo {
    pub kind: String,
    pub label: String,
}

/// Everything needed to reproduce a run; stored verbatim in the sidecar.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSpec {
    pub command: String,
    pub name: String,
    pub source: SourceInfo,
    pub params: LinearizedParams,
    pub mean_fields: Option<MeanFields>,
    pub notes: Vec<String>,
    pub sweep: Option<SweepSpec>,
    pub grid: Option<GridSpec>,
    pub allow_unstable: bool,
    pub seed: Option<u64>,
    pub trajectories: Option<usize>,
    pub n_steps: Option<usize>,
    pub segment_len: Option<usize>,
    pub overlap: Option<f64>,
    pub dt: Option<f64>,
    pub band_max: Option<f64>,
    pub trajectory: bool,
    pub decimate: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Meta {
    tool: String,
    version: String,
    run: RunSpec,
    results: Value,
}

fn command_name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Modes(_) => "modes",
        Command::Squeeze(_) => "squeeze",
        Command::Spectrum(_) => "spectrum",
        Command::Simulate(_) => "simulate",
    }
}

/// Defaults that a config file may carry besides parameters.
#[derive(Default)]
struct FileSettings {
    sweep: Option<SweepSpec>,
    grid: Option<GridSpec>,
    seed: Option<u64>,
    trajectories: Option<usize>,
    n_steps: Option<usize>,
    segment_len: Option<usize>,
    dt: Option<f64>,
}

struct Resolved {
    source: SourceInfo,
    params: LinearizedParams,
    mean_fields: Option<MeanFields>,
    notes: Vec<String>,
    settings: FileSettings,
}

fn from_config_text(text: &str, source: SourceInfo) -> CliResult<Resolved> {
    let cfg = parse_config(text)?;
    let r = cfg.source.resolve()?;
    let mut notes = Vec::new();
    if r.imaginary_coupling {
        notes.push("linearized couplings had imaginary parts; real parts kept".to_string());
    }
    Ok(Resolved {
        source,
        params: r.params,
        mean_fields: r.mean_fields,
        notes,
        settings: FileSettings {
            sweep: cfg.sweep,
            grid: cfg.grid,
            seed: cfg.seed,
            trajectories: cfg.trajectories,
            n_steps: cfg.n_steps,
            segment_len: cfg.segment_len,
            dt: cfg.dt,
        },
    })
}

fn resolve_source(c: &Common) -> CliResult<Resolved> {
    let count = c.config.is_some() as usize + c.preset.is_some() as usize + (!c.params.is_empty()) as usize;
    if count != 1 {
        return Err(CliError::Config("give exactly one of --config, --preset, --param".into()));
    }
    if let Some(path) = &c.config {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        return from_config_text(&text, SourceInfo { kind: "config".into(), label: path.display().to_string() });
    }
    if let Some(name) = &c.preset {
        let p = presets::preset(name).ok_or_else(|| {
            CliError::Config(format!("unknown preset {name:?}; known: {}", presets::NAMES.join(", ")))
        })?;
        return Ok(Resolved {
            source: SourceInfo { kind: "preset".into(), label: p.name.into() },
            params: p.params,
            mean_fields: None,
            notes: p.notes.iter().map(|s| s.to_string()).collect(),
            settings: FileSettings { sweep: p.sweep, grid: p.grid, ..Default::default() },
        });
    }
    let mut text = String::new();
    for kv in &c.params {
        let (k, v) = kv.split_once('=').ok_or_else(|| CliError::Config(format!("expected KEY=VALUE, got {kv:?}")))?;
        text.push_str(&format!("{} = {}\n", k.trim(), v.trim()));
    }
    from_config_text(&text, SourceInfo { kind: "inline".into(), label: c.params.join(" ") })
}

fn read_meta(path: &Path) -> CliResult<Meta> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

/// Turn command-line arguments into a complete run specification.
pub fn build_spec(cmd: &Command) -> CliResult<RunSpec> {
    let common = cmd.common();
    let command = command_name(cmd).to_string();
    if let Some(path) = &common.from_meta {
        if common.config.is_some() || common.preset.is_some() || !common.params.is_empty() {
            return Err(CliError::Config("--from-meta cannot be combined with another parameter source".into()));
        }
        let meta = read_meta(path)?;
        if meta.run.command != command {
            return Err(CliError::Config(format!(
                "sidecar records a {:?} run, not {command:?}",
                meta.run.command
            )));
        }
        return Ok(meta.run);
    }
    let r = resolve_source(common)?;
    let s = r.settings;
    let mut spec = RunSpec {
        name: common.name.clone().unwrap_or_else(|| command.clone()),
        command,
        source: r.source,
        params: r.params,
        mean_fields: r.mean_fields,
        notes: r.notes,
        sweep: None,
        grid: None,
        allow_unstable: false,
        seed: None,
        trajectories: None,
        n_steps: None,
        segment_len: None,
        overlap: None,
        dt: None,
        band_max: None,
        trajectory: false,
        decimate: None,
    };
    match cmd {
        Command::Modes(a) | Command::Squeeze(a) => {
            let sweep = a.sweep.or(s.sweep).ok_or_else(|| CliError::Config("no sweep given".into()))?;
            sweep.grid.validate()?;
            spec.sweep = Some(sweep);
        }
        Command::Spectrum(a) => {
            let grid = a.grid.or(s.grid).unwrap_or(DEFAULT_SPECTRUM_GRID);
            grid.validate()?;
            spec.grid = Some(grid);
            spec.allow_unstable = a.allow_unstable;
        }
        Command::Simulate(a) => {
            spec.seed = Some(a.seed.or(s.seed).unwrap_or(DEFAULT_SEED));
            spec.trajectories = Some(a.trajectories.or(s.trajectories).unwrap_or(DEFAULT_TRAJECTORIES));
            spec.n_steps = Some(a.n_steps.or(s.n_steps).unwrap_or(DEFAULT_N_STEPS));
            spec.segment_len = Some(a.segment_len.or(s.segment_len).unwrap_or(DEFAULT_SEGMENT_LEN));
            spec.overlap = Some(a.overlap.unwrap_or(DEFAULT_OVERLAP));
            spec.dt = a.dt.or(s.dt);
            spec.band_max = Some(a.band_max.unwrap_or(DEFAULT_BAND_MAX));
            spec.trajectory = a.trajectory;
            spec.decimate = Some(a.decimate.unwrap_or(1));
            if spec.trajectories == Some(0) {
                return Err(CliError::Config("--trajectories must be at least 1".into()));
            }
            if spec.decimate == Some(0) {
                return Err(CliError::Config("--decimate must be at least 1".into()));
            }
        }
    }
    Ok(spec)
}

/// Shortest round-trip decimal form.
fn num(v: f64) -> String {
    format!("{v}")
}

fn opt_num(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

struct Table {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn to_csv(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Numerical(format!("csv: {e}"));
        w.write_record(&self.header).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        w.into_inner().map_err(|e| CliError::Numerical(format!("csv: {e}")))
    }
}

struct Outputs {
    files: Vec<(String, Vec<u8>)>,
    results: Value,
}

fn sweep_of(spec: &RunSpec) -> CliResult<SweepSpec> {
    spec.sweep.ok_or_else(|| CliError::Config("no sweep given".into()))
}

fn cmd_modes(spec: &RunSpec) -> CliResult<Outputs> {
    let sweep = sweep_of(spec)?;
    let mut t = Table::new(&[
        "coupling", "re_eps_X", "im_eps_X", "re_eps_Y", "im_eps_Y", "re_eps_Z", "im_eps_Z", "phase", "oracle_eig1",
        "oracle_eig2", "oracle_eig3", "discrepancy",
    ]);
    let mut max_disc: Option<f64> = None;
    for v in sweep.grid.values() {
        let lp = spec.params.with_coupling(sweep.axis, v);
        let nm = excitation_energies(&lp)?;
        let oracle = symplectic_eigenvalues(&hessian(&lp)?)?;
        let disc = closed_form_discrepancy(&nm, &oracle);
        if let Some(d) = disc {
            max_disc = Some(max_disc.map_or(d, |m: f64| m.max(d)));
        }
        let eig = |k: usize| opt_num(oracle.eigs.map(|e| e[k]));
        let phase = if nm.phase.boundary {
            format!("{}:boundary", nm.phase.phase.name())
        } else {
            nm.phase.phase.name().to_string()
        };
        t.rows.push(vec![
            num(v),
            num(nm.eps_x_final.re),
            num(nm.eps_x_final.im),
            num(nm.eps_y_final.re),
            num(nm.eps_y_final.im),
            num(nm.eps_z_final.re),
            num(nm.eps_z_final.im),
            phase,
            eig(0),
            eig(1),
            eig(2),
            opt_num(disc),
        ]);
    }
    let base = &spec.params;
    let results = json!({
        "axis": sweep.axis.name(),
        "rows": t.rows.len(),
        "lambda_c": critical_lambda(base),
        "lambda_us": lambda_unstable(base).ok(),
        "G1_crit": g1_critical(base).ok(),
        "max_discrepancy": max_disc,
    });
    Ok(Outputs { files: vec![(format!("{}.csv", spec.name), t.to_csv()?)], results })
}

fn squeezed_flags(s: &Squeezed) -> String {
    [(s.x, "x"), (s.y, "y"), (s.z, "z"), (s.px, "px"), (s.py, "py"), (s.pz, "pz")]
        .iter()
        .filter(|(f, _)| *f)
        .map(|(_, n)| *n)
        .collect::<Vec<_>>()
        .join(";")
}

fn cmd_squeeze(spec: &RunSpec) -> CliResult<Outputs> {
    let sweep = sweep_of(spec)?;
    let mut t = Table::new(&[
        "coupling", "var_x", "var_y", "var_z", "var_px", "var_py", "var_pz", "squeezed", "divergent", "status",
    ]);
    let mut outside = 0usize;
    for p in variance_sweep(&spec.params, sweep.axis, &sweep.grid.values()) {
        match p.result {
            Ok(v) => {
                let mut row = vec![num(p.coupling)];
                row.extend(v.as_array().map(num));
                row.push(squeezed_flags(&v.squeezed));
                row.push(v.divergent.iter().map(|d| format!("{d:?}")).collect::<Vec<_>>().join(";"));
                row.push("ok".into());
                t.rows.push(row);
            }
            Err(Error::OutsideNormalPhase) => {
                outside += 1;
                let mut row = vec![num(p.coupling)];
                row.extend(std::iter::repeat_n(String::new(), 8));
                row.push("outside_normal_phase".into());
                t.rows.push(row);
            }
            Err(e) => return Err(e.into()),
        }
    }
    let results = json!({
        "axis": sweep.axis.name(),
        "rows": t.rows.len(),
        "outside_normal_phase": outside,
        "lambda_c": critical_lambda(&spec.params),
    });
    Ok(Outputs { files: vec![(format!("{}.csv", spec.name), t.to_csv()?)], results })
}

fn cmd_spectrum(spec: &RunSpec) -> CliResult<Outputs> {
    let grid = spec.grid.unwrap_or(DEFAULT_SPECTRUM_GRID).values();
    let drift = drift_matrix(&spec.params)?;
    let sr = if spec.allow_unstable {
        spec.params.validate()?;
        evaluate_spectrum(&spec.params, &grid)
    } else {
        displacement_spectrum(&spec.params, &grid)?
    };
    let mut t = Table::new(&["omega", "s_q"]);
    for (w, s) in sr.omega.iter().zip(&sr.s_q) {
        t.rows.push(vec![num(*w), num(*s)]);
    }
    let results = json!({
        "rows": t.rows.len(),
        "stable": drift.is_stable(),
        "spectral_abscissa": drift.spectral_abscissa,
        "leading_eigenvalue": [drift.leading_eigenvalue.re, drift.leading_eigenvalue.im],
        "prominence_frac": DEFAULT_PROMINENCE_FRAC,
        "peaks": sr.peaks,
    });
    Ok(Outputs { files: vec![(format!("{}.csv", spec.name), t.to_csv()?)], results })
}

fn cmd_simulate(spec: &RunSpec) -> CliResult<Outputs> {
    let need = |v: Option<usize>, n: &str| v.ok_or_else(|| CliError::Config(format!("missing {n}")));
    let cfg = EnsembleConfig {
        dt: spec.dt,
        n_steps: need(spec.n_steps, "n_steps")?,
        seed: spec.seed.unwrap_or(DEFAULT_SEED),
        trajectories: need(spec.trajectories, "trajectories")?,
        segment_len: need(spec.segment_len, "segment_len")?,
        overlap: spec.overlap.unwrap_or(DEFAULT_OVERLAP),
    };
    if cfg.trajectories == 0 {
        return Err(CliError::Config("--trajectories must be at least 1".into()));
    }
    let drift = drift_matrix(&spec.params)?;
    let dt = cfg.dt.unwrap_or_else(|| drift.default_dt());
    let psd = simulate_psd_ensemble(&spec.params, &cfg)?;
    let band_max = spec.band_max.unwrap_or(DEFAULT_BAND_MAX);
    let cmp = compare_with_analytic(&psd, &spec.params, band_max, DEFAULT_PROMINENCE_FRAC);

    let mut t = Table::new(&["omega", "psd", "s_q"]);
    for (w, p) in psd.omega.iter().zip(&psd.psd) {
        t.rows.push(vec![num(*w), num(*p), num(trimode_core::spectrum::spectral_density_reduced(&spec.params, *w))]);
    }
    let mut files = vec![(format!("{}.csv", spec.name), t.to_csv()?)];

    if spec.trajectory {
        let decimation = spec.decimate.unwrap_or(1);
        let opts = SimOptions { decimation, ..SimOptions::new(dt, cfg.n_steps, cfg.seed) };
        let traj = simulate_with(&spec.params, &opts)?;
        let mut header = vec!["t"];
        header.extend(STATE_LABELS);
        let mut tt = Table::new(&header);
        for (k, s) in traj.samples.iter().enumerate() {
            let mut row = vec![num(k as f64 * traj.dt)];
            row.extend(s.iter().map(|v| num(*v)));
            tt.rows.push(row);
        }
        files.push((format!("{}.trajectory.csv", spec.name), tt.to_csv()?));
    }

    let results = json!({
        "rng": RNG_ALGORITHM,
        "integrator": "Euler-Maruyama",
        "dt": dt,
        "step_guard": langevin::STEP_GUARD,
        "segments": psd.segments,
        "bin_width": psd.bin_width(),
        "comparison": cmp,
        "max_bin_delta": cmp.max_bin_delta(),
        "max_height_error": cmp.max_height_error(),
        "tolerance_bins": REPORT_BINS,
        "tolerance_height": REPORT_HEIGHT_REL,
        "agrees": cmp.agrees(REPORT_BINS, REPORT_HEIGHT_REL),
    });
    Ok(Outputs { files, results })
}

/// Write all files; on any failure remove the ones already written.
fn write_all(out: &Path, files: &[(String, Vec<u8>)]) -> CliResult<Vec<PathBuf>> {
    fs::create_dir_all(out).map_err(|e| CliError::Config(format!("{}: {e}", out.display())))?;
    let mut written = Vec::new();
    for (name, bytes) in files {
        let path = out.join(name);
        if let Err(e) = fs::write(&path, bytes) {
            for p in &written {
                let _ = fs::remove_file(p);
            }
            return Err(CliError::Config(format!("{}: {e}", path.display())));
        }
        written.push(path);
    }
    Ok(written)
}

pub fn execute(spec: &RunSpec, out: &Path) -> CliResult<Vec<PathBuf>> {
    let outputs = match spec.command.as_str() {
        "modes" => cmd_modes(spec)?,
        "squeeze" => cmd_squeeze(spec)?,
        "spectrum" => cmd_spectrum(spec)?,
        "simulate" => cmd_simulate(spec)?,
        other => return Err(CliError::Config(format!("unknown command {other:?}"))),
    };
    let meta = Meta { tool: TOOL.into(), version: VERSION.into(), run: spec.clone(), results: outputs.results };
    let mut sidecar =
        serde_json::to_vec_pretty(&meta).map_err(|e| CliError::Numerical(format!("sidecar: {e}")))?;
    sidecar.push(b'\n');
    let mut files = outputs.files;
    files.push((format!("{}.meta.json", spec.name), sidecar));
    write_all(out, &files)
}
