use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use cvwerner::gaussian::conditional_entropy_gaussian;
use cvwerner::states::{werner, BuildOptions};
use cvwerner::{bounds, FockCutoff, GaussianPovmParams, QuadratureGrid, Truncation, WernerParams};

fn block_eig(c: &mut Criterion) {
    let mut group = c.benchmark_group("block_eig");
    let params = WernerParams::new(0.5, 0.6, 0.5).unwrap();
    for n_max in [20, 40, 80] {
        let rho = werner(
            &params,
            FockCutoff::new(n_max).unwrap(),
            BuildOptions::default(),
        );
        group.bench_with_input(BenchmarkId::from_parameter(n_max), &rho, |b, rho| {
            b.iter(|| rho.spectrum().unwrap())
        });
    }
    group.finish();
}

fn gaussian_integral(c: &mut Criterion) {
    let grid = QuadratureGrid::default();
    let mut group = c.benchmark_group("gaussian_conditional_entropy");
    for t in [0.0, 2.0, 12.0] {
        let povm = GaussianPovmParams::new(t, 0.0).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(t), &povm, |b, povm| {
            b.iter(|| conditional_entropy_gaussian(0.5, 0.5, black_box(povm), &grid, 1e-7).unwrap())
        });
    }
    group.finish();
}

fn bounds_general(c: &mut Criterion) {
    let truncation = Truncation::default();
    let mut group = c.benchmark_group("bounds");
    for (label, p, lambda, mu) in [
        ("eq-0.8", 0.5, 0.8, 0.8),
        ("mu4-0.8", 0.5, 0.4096, 0.8),
        ("low", 0.5, 0.3, 0.3),
    ] {
        let params = WernerParams::new(p, lambda, mu).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(label), &params, |b, params| {
            b.iter(|| bounds(black_box(params), &truncation).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, block_eig, gaussian_integral, bounds_general);
criterion_main!(benches);
