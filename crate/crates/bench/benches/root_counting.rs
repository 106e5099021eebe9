use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use realroots::rootcount::{count_complex_roots_1d, count_real_roots_1d, count_real_roots_2d, default_grid};
use realroots::sampler::sample;
use realroots::stats::worker_rng;
use realroots_bench::{ball_support, cross, interval};

fn one_variable(c: &mut Criterion) {
    let mut group = c.benchmark_group("roots_1d");
    for lambda in [3i64, 10, 30] {
        let f = sample(&interval(lambda), &mut worker_rng(1, 0));
        group.bench_with_input(BenchmarkId::new("real", lambda), &f, |b, f| b.iter(|| count_real_roots_1d(black_box(f)).unwrap()));
        group.bench_with_input(BenchmarkId::new("complex", lambda), &f, |b, f| {
            b.iter(|| count_complex_roots_1d(black_box(f)).unwrap())
        });
    }
    group.finish();
}

fn two_variables(c: &mut Criterion) {
    let mut group = c.benchmark_group("real_roots_2d");
    group.sample_size(20);
    for (name, support) in [("cross", cross(2)), ("disk_m2", ball_support(2, 2)), ("disk_m4", ball_support(2, 4))] {
        let mut rng = worker_rng(2, 0);
        let (f1, f2) = (sample(&support, &mut rng), sample(&support, &mut rng));
        let grid = default_grid(&[support.clone(), support]);
        group.bench_function(name, |b| b.iter(|| count_real_roots_2d(black_box(&f1), black_box(&f2), grid).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, one_variable, two_variables);
criterion_main!(benches);
