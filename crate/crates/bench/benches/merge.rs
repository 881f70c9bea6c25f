use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use emsum_core::{Mergeable, Order, SummarySpec, Support, Value};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn specs() -> Vec<(&'static str, SummarySpec)> {
    let edges: Vec<f64> = (0..=32).map(|i| f64::from(i) * 0.5 - 8.0).collect();
    vec![
        ("count", SummarySpec::Count),
        ("sum", SummarySpec::Sum),
        ("moments4", SummarySpec::Moments { order: 4 }),
        (
            "extreme_k16",
            SummarySpec::ExtremeK {
                k: 16,
                order: Order::LargestFirst,
            },
        ),
        ("histogram32", SummarySpec::Histogram { edges: edges.clone() }),
        (
            "distribution32",
            SummarySpec::Distribution {
                support: Support::Bins(edges),
            },
        ),
    ]
}

fn bench_merge(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let values: Vec<Value> = (0..4096).map(|_| Value::Num(rng.gen_range(-10.0..10.0))).collect();
    let (left, right) = values.split_at(2048);
    let mut group = c.benchmark_group("merge");
    for (name, spec) in specs() {
        let a = spec.summarize(left).unwrap();
        let b = spec.summarize(right).unwrap();
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| black_box(&a).merge(black_box(&b)).unwrap())
        });
    }
    group.finish();
}

fn bench_summarize(c: &mut Criterion) {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let values: Vec<Value> = (0..10_000).map(|_| Value::Num(rng.gen_range(-10.0..10.0))).collect();
    let mut group = c.benchmark_group("summarize_10k");
    for (name, spec) in specs() {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| spec.summarize(black_box(&values)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, bench_merge, bench_summarize);
criterion_main!(benches);
