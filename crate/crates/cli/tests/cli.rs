use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const STABLE: [&str; 9] = [
    "Omega1=1.3",
    "Omega2=1.5",
    "G1=0.05",
    "G2=0.55",
    "lambda=0.5",
    "gamma_c1=0.2",
    "gamma_c2=0.6",
    "gamma_m=1e-4",
    "T_dim=1e5",
];

fn trimode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trimode")).args(args).output().expect("binary runs")
}

fn with_out<'a>(args: &[&'a str], out: &'a Path) -> Vec<&'a str> {
    let mut v = args.to_vec();
    v.push("--out");
    v.push(out.to_str().unwrap());
    v
}

fn stable_params() -> Vec<&'static str> {
    STABLE.iter().flat_map(|p| ["--param", p]).collect()
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

fn meta(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn col(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap()
}

fn f(s: &str) -> f64 {
    s.parse().unwrap()
}

#[test]
fn modes_lambda_sweep_keeps_phonon_energy() {
    let dir = TempDir::new().unwrap();
    let o = trimode(&with_out(&["modes", "--preset", "fig2a"], dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = read_csv(&dir.path().join("modes.csv"));
    assert_eq!(
        h,
        [
            "coupling", "re_eps_X", "im_eps_X", "re_eps_Y", "im_eps_Y", "re_eps_Z", "im_eps_Z", "phase",
            "oracle_eig1", "oracle_eig2", "oracle_eig3", "discrepancy"
        ]
    );
    assert_eq!(rows.len(), 241);
    let z0 = f(&rows[0][col(&h, "re_eps_Z")]);
    for r in &rows {
        assert!((f(&r[col(&h, "re_eps_Z")]) - z0).abs() < 1e-12);
    }
    let m = meta(&dir.path().join("modes.meta.json"));
    assert_eq!(m["results"]["lambda_c"], 1.0);
    assert!(m["results"]["G1_crit"].is_number());
    assert_eq!(m["run"]["source"]["label"], "fig2a");
}

#[test]
fn modes_g1_sweep_loses_phonon_energy_at_threshold() {
    let dir = TempDir::new().unwrap();
    let o = trimode(&with_out(&["modes", "--preset", "fig2b"], dir.path()));
    assert!(o.status.success());
    let (h, rows) = read_csv(&dir.path().join("modes.csv"));
    let g1c = meta(&dir.path().join("modes.meta.json"))["results"]["G1_crit"].as_f64().unwrap();
    let first_imag = rows
        .iter()
        .find(|r| f(&r[col(&h, "im_eps_Z")]) > 0.0)
        .map(|r| f(&r[0]))
        .expect("eps_Z turns imaginary inside the sweep");
    let step = 1.5 / 300.0;
    assert!(first_imag >= g1c && first_imag - g1c <= step + 1e-12, "{first_imag} vs {g1c}");
    // eps_Z^2 falls linearly in G1 here; extrapolating its last two real
    // samples must land on the threshold
    let before: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| f(&r[0]) < g1c)
        .map(|r| (f(&r[0]), f(&r[col(&h, "re_eps_Z")]).powi(2)))
        .collect();
    let [(g_a, e_a), (g_b, e_b)] = before[before.len() - 2..] else { unreachable!() };
    let root = g_b - e_b * (g_b - g_a) / (e_b - e_a);
    assert!((root - g1c).abs() < 1e-9, "{root} vs {g1c}");
}

#[test]
fn empty_sweep_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let o = trimode(&with_out(&["modes", "--preset", "fig2a", "--sweep", "lambda=0:1:0"], dir.path()));
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("modes.csv").exists());
}

#[test]
fn squeeze_sweep_flags_points_past_critical_coupling() {
    let dir = TempDir::new().unwrap();
    let o = trimode(&with_out(&["squeeze", "--preset", "fig3a"], dir.path()));
    assert_eq!(o.status.code(), Some(0));
    let (h, rows) = read_csv(&dir.path().join("squeeze.csv"));
    let status = col(&h, "status");
    for r in &rows {
        let past = f(&r[0]) >= 1.0;
        assert_eq!(r[status] == "outside_normal_phase", past, "{r:?}");
    }
    let m = meta(&dir.path().join("squeeze.meta.json"));
    assert_eq!(m["results"]["outside_normal_phase"], 41);
}

#[test]
fn squeeze_symmetric_sweep_position_columns() {
    // The x and y columns coincide at lambda = 0 only; for lambda > 0 the
    // variance expressions are not symmetric under exchanging the optical
    // modes even with identical parameters, and the columns split.
    let dir = TempDir::new().unwrap();
    let o = trimode(&with_out(&["squeeze", "--preset", "fig3a"], dir.path()));
    assert!(o.status.success());
    let (h, rows) = read_csv(&dir.path().join("squeeze.csv"));
    let (x, y) = (col(&h, "var_x"), col(&h, "var_y"));
    assert_eq!(rows[0][x], rows[0][y]);
    assert_eq!(rows[0][col(&h, "var_px")], rows[0][col(&h, "var_py")]);
    let mid = rows.iter().find(|r| r[0] == "0.5").unwrap();
    assert!((f(&mid[x]) - f(&mid[y])).abs() > 0.1);
}

#[test]
fn spectrum_grid_sets_row_count() {
    let dir = TempDir::new().unwrap();
    let mut args = vec!["spectrum", "--grid", "0:2.5:10000"];
    let p = stable_params();
    args.extend(&p);
    let o = trimode(&with_out(&args, dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = read_csv(&dir.path().join("spectrum.csv"));
    assert_eq!(h, ["omega", "s_q"]);
    assert_eq!(rows.len(), 10000);
    let m = meta(&dir.path().join("spectrum.meta.json"));
    let peaks = m["results"]["peaks"].as_array().unwrap();
    assert_eq!(peaks.len(), 2);
    for key in ["omega_peak", "height", "prominence"] {
        assert!(peaks[0][key].is_number());
    }
    assert_eq!(m["results"]["stable"], true);
}

#[test]
fn unstable_spectrum_exits_4() {
    let dir = TempDir::new().unwrap();
    let o = trimode(&with_out(&["spectrum", "--preset", "fig4"], dir.path()));
    assert_eq!(o.status.code(), Some(4));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("eigenvalue"), "{err}");
    assert!(fs::read_dir(dir.path()).map(|d| d.count() == 0).unwrap_or(true));

    let o = trimode(&with_out(&["spectrum", "--preset", "fig4", "--allow-unstable"], dir.path()));
    assert_eq!(o.status.code(), Some(0));
    let m = meta(&dir.path().join("spectrum.meta.json"));
    assert_eq!(m["results"]["stable"], false);
    assert!(m["results"]["spectral_abscissa"].as_f64().unwrap() > 0.0);
}

#[test]
fn figure_preset_simulation_refuses_instability() {
    let dir = TempDir::new().unwrap();
    let o = trimode(&with_out(&["simulate", "--preset", "fig4", "--seed", "7", "--trajectories", "16"], dir.path()));
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn zero_trajectories_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let mut args = vec!["simulate", "--trajectories", "0"];
    let p = stable_params();
    args.extend(&p);
    assert_eq!(trimode(&with_out(&args, dir.path())).status.code(), Some(2));
}

fn small_simulation() -> Vec<&'static str> {
    let mut args = vec![
        "simulate", "--seed", "3", "--trajectories", "4", "--n-steps", "16384", "--segment-len", "1024",
        "--trajectory", "--decimate", "8",
    ];
    args.extend(stable_params());
    args
}

#[test]
fn simulation_writes_psd_report_and_trajectory() {
    let dir = TempDir::new().unwrap();
    let o = trimode(&with_out(&small_simulation(), dir.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (h, rows) = read_csv(&dir.path().join("simulate.csv"));
    assert_eq!(h, ["omega", "psd", "s_q"]);
    assert_eq!(rows.len(), 513);
    let (th, trows) = read_csv(&dir.path().join("simulate.trajectory.csv"));
    assert_eq!(th, ["t", "X1", "Y1", "X2", "Y2", "Q", "P"]);
    assert_eq!(trows.len(), 16384 / 8 + 1);
    let m = meta(&dir.path().join("simulate.meta.json"));
    assert!(m["results"]["rng"].as_str().unwrap().contains("ChaCha8"));
    assert!(m["results"]["comparison"]["matches"].is_array());
    assert_eq!(m["run"]["seed"], 3);
}

fn outputs(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut v: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap())
        })
        .collect();
    v.sort();
    v
}

#[test]
fn every_subcommand_is_deterministic() {
    let stable = stable_params();
    let mut spectrum = vec!["spectrum", "--grid", "0:2.5:2000"];
    spectrum.extend(&stable);
    let runs: Vec<Vec<&str>> = vec![
        vec!["modes", "--preset", "fig2c"],
        vec!["squeeze", "--preset", "fig3b"],
        spectrum,
        small_simulation(),
    ];
    for args in runs {
        let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
        assert!(trimode(&with_out(&args, a.path())).status.success());
        assert!(trimode(&with_out(&args, b.path())).status.success());
        let (oa, ob) = (outputs(a.path()), outputs(b.path()));
        assert!(!oa.is_empty());
        assert_eq!(oa, ob, "{args:?}");
    }
}

#[test]
fn sidecar_reproduces_run() {
    let a = TempDir::new().unwrap();
    assert!(trimode(&with_out(&small_simulation(), a.path())).status.success());
    let b = TempDir::new().unwrap();
    let meta_path = a.path().join("simulate.meta.json");
    let o = trimode(&with_out(&["simulate", "--from-meta", meta_path.to_str().unwrap()], b.path()));
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(outputs(a.path()), outputs(b.path()));

    let o = trimode(&with_out(&["modes", "--from-meta", meta_path.to_str().unwrap()], b.path()));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn config_file_source() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "Omega1 = 1.0\nOmega2 = 1.0\nG1 = 0.01\nG2 = 0.01\nlambda = 0.0\nsweep = \"lambda=0:0.5:6\"\n").unwrap();
    let out = dir.path().join("out");
    let o = trimode(&["squeeze", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap(), "--name", "cfg"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = read_csv(&out.join("cfg.csv"));
    assert_eq!(rows.len(), 6);
}

#[test]
fn parameter_source_must_be_unique() {
    let dir = TempDir::new().unwrap();
    let o = trimode(&with_out(&["modes", "--preset", "fig2a", "--param", "Omega1=1"], dir.path()));
    assert_eq!(o.status.code(), Some(2));
    let o = trimode(&with_out(&["modes", "--sweep", "lambda=0:1:3"], dir.path()));
    assert_eq!(o.status.code(), Some(2));
    let o = trimode(&with_out(&["modes", "--preset", "fig9"], dir.path()));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_leaves_nothing_behind() {
    let dir = TempDir::new().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "x").unwrap();
    let o = trimode(&["modes", "--preset", "fig2a", "--out", blocker.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 1);
}
