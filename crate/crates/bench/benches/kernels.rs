use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lfb_core::builder::build_optimal_beta_scheme;
use lfb_core::sim::{simulate_binary_ber, Sampling};
use lfb_core::{
    alternate_optimize, received_snr_direct, solve_beta0, solve_gamma0, AlternateOptions, ChannelParams,
    InnerSnrTable, Vector,
};
use std::hint::black_box;

fn root_finders(c: &mut Criterion) {
    let mut group = c.benchmark_group("roots");
    for n in [10, 100, 1000] {
        let p = ChannelParams::new(n, 1.0, 0.1).unwrap();
        group.bench_with_input(BenchmarkId::new("solve_beta0", n), &p, |b, p| {
            b.iter(|| solve_beta0(black_box(p), 0.3).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("solve_gamma0", n), &p, |b, p| {
            b.iter(|| solve_gamma0(black_box(p)).unwrap())
        });
    }
    group.finish();
}

fn schemes(c: &mut Criterion) {
    let mut group = c.benchmark_group("schemes");
    for n in [8, 32, 128] {
        let p = ChannelParams::new(n, 1.0, 0.1).unwrap();
        let s = build_optimal_beta_scheme(&p, 0.3).unwrap();
        group.bench_with_input(BenchmarkId::new("received_snr_direct", n), &s, |b, s| {
            b.iter(|| received_snr_direct(black_box(s)).unwrap())
        });
    }
    for n in [4, 8] {
        let p = ChannelParams::new(n, 1.0, 0.1).unwrap();
        let q0 = Vector::from_fn(n, |i, _| 1.0 + 0.1 * i as f64);
        group.bench_with_input(BenchmarkId::new("alternate_optimize", n), &q0, |b, q0| {
            b.iter(|| alternate_optimize(black_box(q0), &p, 0.3, AlternateOptions::default()).unwrap())
        });
    }
    group.finish();
}

fn exponents(c: &mut Criterion) {
    let mut group = c.benchmark_group("exponent");
    group.sample_size(10);
    group.bench_function("inner_snr_table_1024", |b| {
        b.iter(|| InnerSnrTable::new(black_box(1.0), 1.0, 1024).unwrap())
    });
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("monte_carlo");
    group.sample_size(10);
    let p = ChannelParams::new(16, 1.0, 1.0).unwrap();
    let s = build_optimal_beta_scheme(&p, solve_gamma0(&p).unwrap().gamma0).unwrap();
    for sampling in [Sampling::Plain, Sampling::Importance] {
        group.bench_with_input(BenchmarkId::new("binary_ber_1e5", format!("{sampling:?}")), &sampling, |b, &sm| {
            b.iter(|| simulate_binary_ber(black_box(&s), 100_000, 1, sm).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, root_finders, schemes, exponents, monte_carlo);
criterion_main!(benches);
