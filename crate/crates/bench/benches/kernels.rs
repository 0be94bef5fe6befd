use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use lvar_bench::{agents, capacities, outcome, staircase};
use lvar_core::{g_value, inf_convolution, lambda_var, FiniteSpace, PhiFn};

fn bench_lambda_var(c: &mut Criterion) {
    let mut group = c.benchmark_group("lambda_var");
    for n in [4usize, 8, 16] {
        let s = FiniteSpace::anonymous(n).unwrap();
        let x = outcome(&s);
        let l = staircase(6);
        for (name, w) in capacities(&s) {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| lambda_var(black_box(&w), &l, &x).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_inf_convolution(c: &mut Criterion) {
    let mut group = c.benchmark_group("inf_convolution");
    group.sample_size(20);
    for (n_omega, n_agents) in [(6usize, 2usize), (8, 3), (10, 3)] {
        let s = FiniteSpace::anonymous(n_omega).unwrap();
        let x = outcome(&s);
        let ag = agents(&s, n_agents);
        let id = format!("{n_agents} agents");
        group.bench_with_input(BenchmarkId::new(id, n_omega), &n_omega, |b, _| {
            b.iter(|| inf_convolution(black_box(&ag), &x).unwrap())
        });
    }
    group.finish();
}

fn bench_g_value(c: &mut Criterion) {
    let mut group = c.benchmark_group("g_value");
    let phis = [
        ("kl", PhiFn::Kl),
        ("chi_squared", PhiFn::ChiSquared),
        ("alpha_3", PhiFn::alpha(3.0).unwrap()),
    ];
    for (name, phi) in phis {
        group.bench_function(name, |b| {
            b.iter(|| {
                (1..100)
                    .map(|k| g_value(&phi, 0.2, black_box(k as f64 / 200.0)).unwrap())
                    .sum::<f64>()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, bench_lambda_var, bench_inf_convolution, bench_g_value);
criterion_main!(benches);
