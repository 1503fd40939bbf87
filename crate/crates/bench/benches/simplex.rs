use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nonloc_bench::workloads;
use nonloc_core::certifier::{build_dual_lp, build_primal_lp};
use nonloc_core::lp;
use nonloc_core::Bipartition;

fn bench_simplex(c: &mut Criterion) {
    let mut group = c.benchmark_group("simplex");
    group.sample_size(10);
    for (name, set) in workloads() {
        let primal = build_primal_lp(&set, Bipartition::C).unwrap();
        let dual = build_dual_lp(&set, Bipartition::C).unwrap();
        group.bench_with_input(BenchmarkId::new("primal_exact", name), &primal, |b, lp| b.iter(|| lp::solve(lp)));
        group.bench_with_input(BenchmarkId::new("primal_float", name), &primal, |b, lp| {
            b.iter(|| lp::solve_float(lp))
        });
        group.bench_with_input(BenchmarkId::new("dual_exact", name), &dual, |b, lp| b.iter(|| lp::solve(lp)));
    }
    group.finish();
}

criterion_group!(benches, bench_simplex);
criterion_main!(benches);
