//! Sequential (one worker) against rayon-parallel execution of the Monte Carlo
//! replication loop and of the per-row wavelet pyramid.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fractal_eigen::config::RunConfig;
use fractal_eigen::montecarlo::run_replications;
use fractal_eigen::par::{default_workers, with_workers};
use fractal_eigen::rng::{stream_rng, Stream};
use fractal_eigen::wavelet::{make_filter_bank, pyramid_transform, WaveletFamily};
use fractal_eigen::{Matrix, MultivariateSeries};
use rand::Rng;
use rand_distr::StandardNormal;

const STUDY: &str = r#"{ "model": { "hurst": [0.2, 0.5, 0.8], "n": 4096,
    "mixing": { "kind": "random_gaussian_unit_columns", "ratio": 0.5 } },
  "analysis": { "j1": 4, "j2": 6 }, "mc": { "replications": 16, "seed": 1 } }"#;

fn workers() -> Vec<(&'static str, usize)> {
    vec![("sequential", 1), ("parallel", default_workers().max(2))]
}

fn replications(c: &mut Criterion) {
    let mc = RunConfig::from_json(STUDY).unwrap().mc_config().unwrap();
    let mut group = c.benchmark_group("replications");
    group.sample_size(10);
    for (label, w) in workers() {
        group.bench_with_input(BenchmarkId::from_parameter(label), &w, |b, &w| {
            b.iter(|| run_replications(&mc, w).unwrap())
        });
    }
    group.finish();
}

fn pyramid(c: &mut Criterion) {
    let mut rng = stream_rng(2, 0, Stream::Signal);
    let series = MultivariateSeries::new(Matrix::from_fn(64, 1 << 14, |_, _| {
        rng.sample(StandardNormal)
    }))
    .unwrap();
    let filter = make_filter_bank(WaveletFamily::Daubechies, 4).unwrap();
    let mut group = c.benchmark_group("pyramid");
    for (label, w) in workers() {
        group.bench_with_input(BenchmarkId::from_parameter(label), &w, |b, &w| {
            b.iter(|| with_workers(w, || pyramid_transform(&series, &filter, 8).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, replications, pyramid);
criterion_main!(benches);
