use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use rankhull::{convex_hull_ranked, hull_oracle, PipelineConfig};
use rankhull_bench::{dense_set, DENSITIES};

fn hulls(c: &mut Criterion) {
    let mut group = c.benchmark_group("hull_640x480");
    let cfg = PipelineConfig::default();
    for d in DENSITIES {
        let pts = dense_set(d);
        group.throughput(Throughput::Elements(pts.len() as u64));
        group.bench_with_input(BenchmarkId::new("ranked", d), &pts, |b, pts| {
            b.iter(|| convex_hull_ranked(black_box(pts), &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("oracle", d), &pts, |b, pts| {
            b.iter(|| hull_oracle(black_box(pts)))
        });
    }
    group.finish();
}

criterion_group!(benches, hulls);
criterion_main!(benches);
