use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use nckp_bench::TABLE_SIZES;
use nckp_core::{total_partitions, total_regular, Tables};

fn preprocessing(c: &mut Criterion) {
    let mut g = c.benchmark_group("tables");
    g.sample_size(10);
    for n in TABLE_SIZES {
        g.bench_with_input(BenchmarkId::new("plain", n), &n, |b, &n| {
            b.iter(|| Tables::build(3, n, false).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("regular", n), &n, |b, &n| {
            b.iter(|| Tables::build(3, n, true).unwrap())
        });
    }
    g.finish();
}

fn totals(c: &mut Criterion) {
    let mut g = c.benchmark_group("totals");
    g.sample_size(10);
    for k in [3, 4] {
        g.bench_with_input(BenchmarkId::new("plain", k), &k, |b, &k| {
            b.iter(|| total_partitions(k, 60).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("regular", k), &k, |b, &k| {
            b.iter(|| total_regular(k, 60).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, preprocessing, totals);
criterion_main!(benches);
