use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use tamesep_bench::boxes;
use tamesep_core::coloring::{col_profile, volume_ordering};
use tamesep_core::graph::{build_intersection_graph, build_intersection_graph_pairwise};
use tamesep_core::harness::{lemma_suite, LemmaSuiteConfig};
use tamesep_core::separators::{bfs_layer_separator, default_starts, ordering_separator};

fn intersection_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("intersection_graph");
    for n in [256, 1024] {
        let b = boxes(n, 2);
        group.bench_with_input(BenchmarkId::new("sweep", n), &b, |bch, b| {
            bch.iter(|| build_intersection_graph(black_box(&b.representation)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("pairwise", n), &b, |bch, b| {
            bch.iter(|| build_intersection_graph_pairwise(black_box(&b.representation)).unwrap())
        });
    }
    group.finish();
}

fn coloring(c: &mut Criterion) {
    let mut group = c.benchmark_group("col_profile");
    for n in [256, 1024] {
        let b = boxes(n, 2);
        let g = build_intersection_graph(&b.representation).unwrap();
        let ord = volume_ordering(&b.representation).unwrap();
        group.bench_with_input(BenchmarkId::new("r8", n), &(g, ord), |bch, (g, ord)| {
            bch.iter(|| col_profile(black_box(g), black_box(ord), 8).unwrap())
        });
    }
    group.finish();
}

fn separators(c: &mut Criterion) {
    let mut group = c.benchmark_group("separator");
    let b = boxes(1024, 2);
    let g = build_intersection_graph(&b.representation).unwrap();
    let ord = volume_ordering(&b.representation).unwrap();
    group.bench_function("bfs_layer", |bch| bch.iter(|| bfs_layer_separator(black_box(&g), &default_starts(&g)).unwrap()));
    group.bench_function("ordering_r2", |bch| bch.iter(|| ordering_separator(black_box(&g), &ord, 2).unwrap()));
    group.finish();
}

fn lemmas(c: &mut Criterion) {
    let cfg = LemmaSuiteConfig::new(1, 50, 10, 50);
    c.bench_function("lemma_suite_small", |bch| bch.iter(|| lemma_suite(black_box(&cfg)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = intersection_graph, coloring, separators, lemmas
}
criterion_main!(benches);
