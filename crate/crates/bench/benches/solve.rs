use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use mwpb_bench::{dense, integer, matching};
use mwpb_core::certificate::verify;
use mwpb_core::rational::solve_rational;
use mwpb_core::solver::{solve, Outcome};

fn dense_scaling(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_dense_m8");
    for n in [16usize, 32, 64] {
        let inst = dense(0, 8, n, 10007);
        g.bench_with_input(BenchmarkId::from_parameter(n), &inst, |b, inst| {
            b.iter(|| solve(inst).unwrap())
        });
    }
    g.finish();
}

fn small_fields(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_m16_n48");
    for p in [2u64, 3, 10007] {
        let inst = dense(1, 16, 48, p);
        g.bench_with_input(BenchmarkId::from_parameter(p), &inst, |b, inst| {
            b.iter(|| solve(inst).unwrap())
        });
    }
    g.finish();
}

fn matchings(c: &mut Criterion) {
    let mut g = c.benchmark_group("solve_matching");
    for v in [8usize, 12, 16] {
        let inst = matching(0, v);
        g.bench_with_input(BenchmarkId::from_parameter(v), &inst, |b, inst| {
            b.iter(|| solve(inst).unwrap())
        });
    }
    g.finish();
}

fn certificate_check(c: &mut Criterion) {
    let inst = dense(2, 8, 32, 10007);
    let Outcome::Optimal(s) = solve(&inst).unwrap() else {
        return;
    };
    c.bench_function("verify_m8_n32", |b| {
        b.iter(|| verify(&inst, &s.certificate))
    });
}

fn rational(c: &mut Criterion) {
    let inst = integer(0, 4, 12);
    c.bench_function("solve_rational_m4_n12", |b| {
        b.iter(|| solve_rational(&inst))
    });
}

criterion_group!(
    benches,
    dense_scaling,
    small_fields,
    matchings,
    certificate_check,
    rational
);
criterion_main!(benches);
