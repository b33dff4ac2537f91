use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use greedy_bench::random_problem;
use greedy_core::bounds::{e_m_clean_series, noisy_bound_series, NoisyBoundParams};
use greedy_core::{best_atom, run_oga, run_wga, weak_atom, GreedyConfig, SelectionPolicy, WeakSchedule};

fn selection(c: &mut Criterion) {
    let mut group = c.benchmark_group("selection");
    for dim in [16, 64, 256] {
        let (dict, f) = random_problem(dim, 1);
        group.bench_with_input(BenchmarkId::new("best_atom", dim), &dim, |b, _| {
            b.iter(|| best_atom(black_box(&f), &dict))
        });
        group.bench_with_input(BenchmarkId::new("threshold_first", dim), &dim, |b, _| {
            b.iter(|| weak_atom(black_box(&f), &dict, 0.5, SelectionPolicy::ThresholdFirst).unwrap())
        });
    }
    group.finish();
}

fn runners(c: &mut Criterion) {
    let mut group = c.benchmark_group("runners");
    for dim in [16, 64] {
        let (dict, f) = random_problem(dim, 2);
        let config = GreedyConfig::pga(200);
        group.bench_with_input(BenchmarkId::new("pga_200", dim), &dim, |b, _| {
            b.iter(|| run_wga(black_box(&f), &dict, &config).unwrap())
        });
        let relaxed = GreedyConfig::wga(0.5, 0.5, 200).with_policy(SelectionPolicy::ThresholdFirst);
        group.bench_with_input(BenchmarkId::new("wga_200", dim), &dim, |b, _| {
            b.iter(|| run_wga(black_box(&f), &dict, &relaxed).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("oga", dim), &dim, |b, _| {
            b.iter(|| run_oga(black_box(&f), &dict, &GreedyConfig::pga(dim)).unwrap())
        });
    }
    group.finish();
}

fn bounds(c: &mut Criterion) {
    let schedule = WeakSchedule::Constant { t: 1.0 };
    c.bench_function("e_m_clean_series_2000", |b| {
        b.iter(|| e_m_clean_series(black_box(&schedule), 1.0, 2000).unwrap())
    });
    let params = NoisyBoundParams {
        epsilon: 0.05,
        scale: 1.0,
        h: 0.9,
        f_norm: 1.0,
        b: 1.0,
        schedule,
    };
    c.bench_function("noisy_bound_series_400", |b| {
        b.iter(|| noisy_bound_series(black_box(&params), 400).unwrap())
    });
}

criterion_group!(benches, selection, runners, bounds);
criterion_main!(benches);
