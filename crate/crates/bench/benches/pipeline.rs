use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qbn_bench::layered_network;
use qbn_core::{
    compile, joint_distribution, load_fixture, statevector, CompileOptions, FixtureId,
    LoweringLevel,
};
use qbn_core::sim::Sampler;

fn bench_compile(c: &mut Criterion) {
    let mut group = c.benchmark_group("compile");
    for id in [FixtureId::Oil4, FixtureId::Liquidity10, FixtureId::Bankruptcy9] {
        let bn = load_fixture(id).unwrap().network;
        for level in [LoweringLevel::Mcry, LoweringLevel::Full] {
            group.bench_with_input(BenchmarkId::new(id.name(), level), &bn, |b, bn| {
                b.iter(|| compile(black_box(bn), &CompileOptions::level(level)).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_statevector(c: &mut Criterion) {
    let mut group = c.benchmark_group("statevector");
    for nodes in [8, 12, 16] {
        let bn = layered_network(nodes, 2);
        let circuit = compile(&bn, &CompileOptions::default()).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(nodes), &circuit, |b, c| {
            b.iter(|| statevector(black_box(c)).unwrap())
        });
    }
    group.finish();
}

fn bench_sampling(c: &mut Criterion) {
    let bn = load_fixture(FixtureId::Liquidity10).unwrap().network;
    let circuit = compile(&bn, &CompileOptions::default()).unwrap();
    let sampler = Sampler::new(&circuit).unwrap();
    c.bench_function("sample/liquidity10/8192", |b| {
        b.iter(|| sampler.sample(black_box(8192), 7).unwrap())
    });
}

fn bench_oracle(c: &mut Criterion) {
    let bn = layered_network(16, 3);
    c.bench_function("joint_distribution/16", |b| {
        b.iter(|| joint_distribution(black_box(&bn)).unwrap())
    });
}

criterion_group!(benches, bench_compile, bench_statevector, bench_sampling, bench_oracle);
criterion_main!(benches);
