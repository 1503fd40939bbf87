use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nonloc_bench::workloads;
use nonloc_core::certifier::{certify, verify_certificate};
use nonloc_core::fixtures;
use nonloc_core::Bipartition;

fn bench_certify(c: &mut Criterion) {
    let mut group = c.benchmark_group("certify");
    group.sample_size(10);
    for (name, set) in workloads() {
        group.bench_with_input(BenchmarkId::from_parameter(name), &set, |b, set| b.iter(|| certify(set).unwrap()));
    }
    group.finish();
}

fn bench_verify(c: &mut Criterion) {
    let set = fixtures::s8();
    let cert = fixtures::s8_certificate(Bipartition::A);
    c.bench_function("verify/s8_a_dense", |b| b.iter(|| verify_certificate(&set, &cert).unwrap()));
}

criterion_group!(benches, bench_certify, bench_verify);
criterion_main!(benches);
