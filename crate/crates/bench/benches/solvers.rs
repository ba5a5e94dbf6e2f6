use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use persuade_bench::{multi, single, symmetric};
use persuade_core::multi::{solve_arbitrary, solve_budget_balanced, solve_lp, DEFAULT_COLUMN_LIMIT};
use persuade_core::reduction::{cutting_plane_solve, BruteForceOracle};
use persuade_core::single::{canonical_symmetric_scheme, find_lambda_star, nonnegative_dichotomy, solve_optimal};
use persuade_core::PaymentModel;

fn single_lp(c: &mut Criterion) {
    let mut g = c.benchmark_group("single_lp");
    for (n, k) in [(2, 4), (3, 6), (4, 8)] {
        let inst = single(n, k);
        for model in [PaymentModel::Zero, PaymentModel::Arbitrary] {
            g.bench_with_input(BenchmarkId::new(model.name(), format!("n{n}_k{k}")), &inst, |b, i| {
                b.iter(|| solve_optimal(black_box(i), model).unwrap())
            });
        }
    }
    g.finish();
}

fn symmetric_closed_forms(c: &mut Criterion) {
    let mut g = c.benchmark_group("symmetric");
    for n in [2, 3] {
        let inst = symmetric(n, 3);
        g.bench_with_input(BenchmarkId::new("canonical_scheme", n), &inst, |b, i| {
            b.iter(|| canonical_symmetric_scheme(black_box(i)).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("arbitrary_lp", n), &inst, |b, i| {
            b.iter(|| solve_optimal(black_box(i), PaymentModel::Arbitrary).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("lambda_star", n), &inst, |b, i| b.iter(|| find_lambda_star(black_box(i)).unwrap()));
        g.bench_with_input(BenchmarkId::new("dichotomy", n), &inst, |b, i| b.iter(|| nonnegative_dichotomy(black_box(i)).unwrap()));
    }
    g.finish();
}

fn multi_receiver(c: &mut Criterion) {
    let mut g = c.benchmark_group("multi");
    g.sample_size(20);
    for n in [2, 3, 4] {
        let inst = multi(n, 3);
        let id = format!("N{n}_k3");
        g.bench_with_input(BenchmarkId::new("budget_balanced", &id), &inst, |b, i| {
            b.iter(|| solve_budget_balanced(black_box(i), DEFAULT_COLUMN_LIMIT).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("total_payoff", &id), &inst, |b, i| {
            b.iter(|| solve_arbitrary(black_box(i), DEFAULT_COLUMN_LIMIT, false).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("zero_lp", &id), &inst, |b, i| {
            b.iter(|| solve_lp(black_box(i), PaymentModel::Zero, DEFAULT_COLUMN_LIMIT).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("cutting_plane", &id), &inst, |b, i| {
            let oracle = BruteForceOracle::new(i, DEFAULT_COLUMN_LIMIT).unwrap();
            b.iter(|| cutting_plane_solve(black_box(i), &oracle, DEFAULT_COLUMN_LIMIT).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, single_lp, symmetric_closed_forms, multi_receiver);
criterion_main!(benches);
