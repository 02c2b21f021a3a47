//! Benchmarks for the numerically heavy paths: exact NML enumeration,
//! model-volume quadrature, grid posterior updates, and coverage simulation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fisherkit_core::montecarlo::{coverage_experiment, SimConfig};
use fisherkit_core::{builtin_model, geometry, jeffreys, mdl, CountVector};
use std::hint::black_box;

fn bench_nml(c: &mut Criterion) {
    let model = builtin_model("mpt-individual-word").unwrap();
    let mut group = c.benchmark_group("nml_exact");
    for n in [30u64, 100, 300] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| mdl::nml_exact(black_box(&model), black_box(n)).unwrap())
        });
    }
    group.finish();
}

fn bench_volume(c: &mut Criterion) {
    let mut group = c.benchmark_group("model_volume");
    for name in ["bernoulli", "bent-coin", "categorical-beta"] {
        let model = builtin_model(name).unwrap();
        group.bench_function(name, |b| {
            b.iter(|| geometry::model_volume(black_box(&model)).unwrap())
        });
    }
    group.finish();
}

fn bench_posterior(c: &mut Criterion) {
    let model = builtin_model("bernoulli").unwrap();
    let data = CountVector::new(vec![3, 7]);
    let mut group = c.benchmark_group("grid_posterior");
    for g in [2048usize, 16384] {
        let prior = jeffreys::uniform_prior((0.0, 1.0), g).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(g), &g, |b, _| {
            b.iter(|| {
                jeffreys::grid_posterior(black_box(&prior), black_box(&model), black_box(&data))
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn bench_coverage(c: &mut Criterion) {
    let model = builtin_model("bernoulli").unwrap();
    let config = SimConfig { theta: vec![0.5], n: 25, k: 10_000, seed: 12 };
    c.bench_function("coverage_10k_replicates", |b| {
        b.iter(|| coverage_experiment(black_box(&model), black_box(&config), 0.95).unwrap())
    });
}

criterion_group!(benches, bench_nml, bench_volume, bench_posterior, bench_coverage);
criterion_main!(benches);
