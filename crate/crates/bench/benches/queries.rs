use std::collections::BTreeSet;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fpq_bench::workload::bundled_queries;
use fpq_bench::{gen_map_graph, gen_orders};
use fpq_core::{eval_nre, eval_nre_directed, eval_query, parse_nre, Constant, Direction, HeterogeneousDb};

fn bundled(c: &mut Criterion) {
    let map = gen_map_graph(42, 2330);
    let mut group = c.benchmark_group("bundled");
    group.sample_size(20);
    for size in [10_000usize, 100_000] {
        let d = HeterogeneousDb::new(map.graph.clone(), gen_orders(42, size, &map).database());
        for (name, q) in bundled_queries() {
            group.bench_with_input(BenchmarkId::new(name, size), &q, |b, q| b.iter(|| eval_query(&d, q).unwrap()));
        }
    }
    group.finish();
}

fn map_paths(c: &mut Criterion) {
    let map = gen_map_graph(42, 2330);
    let mut group = c.benchmark_group("map_paths");
    for text in ["next^-1::lon/next::lat", "next::nd/next::ref/next^-1::id", "self::[next::tag/edge::tourism]/next::lat"] {
        let e = parse_nre(text).unwrap();
        group.bench_function(BenchmarkId::new("all_pairs", text), |b| b.iter(|| eval_nre(&map.graph, &e)));
    }
    let seeds: BTreeSet<Constant> = map.points.iter().take(10).map(|p| p.node.clone()).collect();
    let star = parse_nre("(next|next^-1)*").unwrap();
    group.bench_function("seeded_star", |b| {
        b.iter(|| eval_nre_directed(&map.graph, &star, &seeds, Direction::Forward))
    });
    group.finish();
}

criterion_group!(benches, bundled, map_paths);
criterion_main!(benches);
