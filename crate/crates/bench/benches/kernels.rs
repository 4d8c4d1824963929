use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use zerolab::correlations::{clustering_gap, permanent, rho_k_closed_form, PointConfiguration};
use zerolab::gef::KernelSpec;
use zerolab::partitions::moments_to_cumulants;
use zerolab::zeros::{find_zeros, truncation_degree, TruncatedGef};
use zerolab::Complex64;
use zerolab_bench::{gram_matrix, random_configuration};

fn bench_permanent(c: &mut Criterion) {
    let mut g = c.benchmark_group("permanent");
    for n in [4, 8, 12] {
        let m = gram_matrix(n, n as u64);
        g.bench_with_input(BenchmarkId::from_parameter(n), &m, |b, m| b.iter(|| permanent(black_box(m))));
    }
    g.finish();
}

fn bench_intensity(c: &mut Criterion) {
    let mut g = c.benchmark_group("rho_k_closed_form");
    for k in 1..=4 {
        let cfg = random_configuration(k, 3.0, 10 + k as u64);
        g.bench_with_input(BenchmarkId::from_parameter(k), &cfg, |b, cfg| {
            b.iter(|| rho_k_closed_form(&KernelSpec::Gef, black_box(cfg)))
        });
    }
    g.finish();
    let cfg = PointConfiguration::new(vec![
        Complex64::new(0.0, 0.0),
        Complex64::new(0.0, 0.7),
        Complex64::new(5.0, 0.0),
        Complex64::new(5.0, 0.7),
    ])
    .and_then(|c| c.with_partition(vec![0, 1], vec![2, 3]))
    .unwrap();
    c.bench_function("clustering_gap/4", |b| b.iter(|| clustering_gap(&KernelSpec::Gef, black_box(&cfg))));
}

fn bench_zeros(c: &mut Criterion) {
    let mut g = c.benchmark_group("find_zeros");
    g.sample_size(20);
    for r in [5.0, 10.0] {
        let poly = TruncatedGef::replica(1, 0, truncation_degree(r));
        g.bench_with_input(BenchmarkId::from_parameter(r), &poly, |b, p| b.iter(|| find_zeros(black_box(p), r)));
    }
    g.finish();
}

fn bench_cumulants(c: &mut Criterion) {
    let m: Vec<f64> = (1..=12).map(|k| 1.0 / k as f64).collect();
    c.bench_function("moments_to_cumulants/12", |b| b.iter(|| moments_to_cumulants(black_box(&m))));
}

criterion_group!(benches, bench_permanent, bench_intensity, bench_zeros, bench_cumulants);
criterion_main!(benches);
