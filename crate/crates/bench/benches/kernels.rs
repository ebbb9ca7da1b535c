use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use trimode_core::langevin::simulate_q;
use trimode_core::{
    displacement_spectrum, estimate_psd, excitation_energies, hessian, symplectic_eigenvalues, variances,
    LinearizedParams, SimOptions,
};

fn stable() -> LinearizedParams {
    LinearizedParams::new(1.3, 1.5, 1.0, 0.05, 0.55, 0.5)
        .and_then(|p| p.with_damping(0.2, 0.6, 1e-4))
        .and_then(|p| p.with_temperature(1e5))
        .unwrap()
}

fn closed_forms(c: &mut Criterion) {
    let lp = LinearizedParams::new(1.0, 1.0, 1.0, 0.01, 0.01, 0.5).unwrap();
    c.bench_function("excitation_energies", |b| b.iter(|| excitation_energies(black_box(&lp))));
    c.bench_function("variances", |b| b.iter(|| variances(black_box(&lp))));
    c.bench_function("symplectic_eigenvalues", |b| {
        b.iter(|| symplectic_eigenvalues(&hessian(black_box(&lp)).unwrap()))
    });
}

fn spectra(c: &mut Criterion) {
    let lp = stable();
    let grid: Vec<f64> = (1..=10_000).map(|k| 2.5 * k as f64 / 10_000.0).collect();
    c.bench_function("displacement_spectrum_1e4", |b| b.iter(|| displacement_spectrum(black_box(&lp), &grid)));
}

fn stochastic(c: &mut Criterion) {
    let lp = stable();
    let opts = SimOptions::new(0.005, 1 << 14, 1);
    c.bench_function("simulate_2^14_steps", |b| b.iter(|| simulate_q(black_box(&lp), &opts)));
    let q = simulate_q(&lp, &SimOptions::new(0.005, 1 << 16, 2)).unwrap();
    c.bench_function("welch_2^16_seg_2^12", |b| b.iter(|| estimate_psd(black_box(&q), 0.005, 1 << 12, 0.5)));
}

criterion_group!(benches, closed_forms, spectra, stochastic);
criterion_main!(benches);
