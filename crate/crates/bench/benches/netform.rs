use criterion::{criterion_group, criterion_main, Criterion};
use netform_bench::{bridged_cliques, two_groups};
use netform_core::dynamics::run;
use netform_core::search::Survey;
use netform_core::{is_pairwise_stable, Network, PairSelector, SearchSpace};
use std::hint::black_box;

fn payoffs(c: &mut Criterion) {
    let s = two_groups(7, 7, 0.3);
    let net = bridged_cliques(&s);
    c.bench_function("welfare n=14", |b| b.iter(|| s.welfare(black_box(&net))));
    c.bench_function("stability check n=14", |b| {
        b.iter(|| is_pairwise_stable(black_box(&net), &s))
    });
}

fn enumeration(c: &mut Criterion) {
    let mut g = c.benchmark_group("enumeration");
    g.sample_size(10);
    let s = two_groups(3, 3, 0.45);
    g.bench_function("full space n=6", |b| {
        b.iter(|| Survey::run(&SearchSpace::full(), black_box(&s)).unwrap())
    });
    let s = two_groups(3, 5, 0.45);
    g.bench_function("interconnections 3x5", |b| {
        b.iter(|| Survey::run(&SearchSpace::interconnection(), black_box(&s)).unwrap())
    });
    g.finish();
}

fn dynamics(c: &mut Criterion) {
    let s = two_groups(7, 7, 0.3);
    let e0 = Network::empty(14).unwrap();
    c.bench_function("dynamics 7+7 seeded", |b| {
        b.iter(|| run(&e0, &PairSelector::SeededUniform(black_box(1)), &s, 5000, 0).unwrap())
    });
}

criterion_group!(benches, payoffs, enumeration, dynamics);
criterion_main!(benches);
