use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};
use rankhull::{BlockWidth, ShuffleVariant};
use rankhull_bench::{dense_set, loaded_table, DENSITIES};

fn shuffles(c: &mut Criterion) {
    let mut group = c.benchmark_group("shuffle_640x480");
    for d in DENSITIES {
        let pts = dense_set(d);
        for width in [BlockWidth::P16, BlockWidth::P32, BlockWidth::P64] {
            let table = loaded_table(&pts, width);
            group.bench_with_input(
                BenchmarkId::new(format!("fast_p{}", width.bits()), d),
                &table,
                |b, t| {
                    b.iter_batched(
                        || t.clone(),
                        |t| black_box(t.shuffle_in_place(ShuffleVariant::Fast)),
                        BatchSize::LargeInput,
                    )
                },
            );
        }
        let table = loaded_table(&pts, BlockWidth::P64);
        group.bench_with_input(BenchmarkId::new("naive", d), &table, |b, t| {
            b.iter(|| rankhull::shuffle_naive(black_box(t)))
        });
    }
    group.finish();
}

criterion_group!(benches, shuffles);
criterion_main!(benches);
