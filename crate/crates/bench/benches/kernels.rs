//! Benchmarks for the pipeline stages: discretization, graph
//! construction and algebra, every dissimilarity metric, and the
//! end-to-end build/predict path at the realistic 60-week/15-week shape.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use tegad_bench::weekly_series;
use tegad_core::{
    build_model, discover_tegs, generate_graph, global_graph, graph_dissimilarity, predict,
    DetectorParams, Discretizer, MetricId,
};

fn bench_discretization(c: &mut Criterion) {
    let series = weekly_series(60, 7);
    let discretizer = Discretizer::fit(&series, 30).unwrap();

    let mut group = c.benchmark_group("discretization");
    group.throughput(Throughput::Elements(series.len() as u64));
    group.bench_function("fit_60_weeks", |b| {
        b.iter(|| Discretizer::fit(black_box(&series), 30).unwrap())
    });
    group.bench_function("discretize_60_weeks", |b| {
        b.iter(|| discretizer.discretize(black_box(&series)))
    });
    group.finish();
}

fn bench_graphs(c: &mut Criterion) {
    let series = weekly_series(60, 7);
    let discretizer = Discretizer::fit(&series, 30).unwrap();
    let levels = discretizer.discretize(&series);
    let graphs = discover_tegs(&levels, 336).unwrap();
    let epoch = levels.levels()[..336].to_vec();
    let global = global_graph(&graphs).unwrap();

    let mut group = c.benchmark_group("graphs");
    group.bench_function("generate_graph_336_obs", |b| {
        b.iter(|| generate_graph(black_box(&epoch)).unwrap())
    });
    group.bench_function("global_graph_60_epochs", |b| {
        b.iter(|| global_graph(black_box(&graphs)).unwrap())
    });
    group.bench_function("resize_epoch_to_global", |b| {
        b.iter(|| graphs[0].resize(black_box(global.levels())).unwrap())
    });
    group.finish();
}

fn bench_metrics(c: &mut Criterion) {
    let series = weekly_series(60, 7);
    let discretizer = Discretizer::fit(&series, 30).unwrap();
    let levels = discretizer.discretize(&series);
    let graphs = discover_tegs(&levels, 336).unwrap();
    let global = global_graph(&graphs).unwrap();
    // Pre-align the level sets; the group then measures the metric alone.
    let epoch = graphs[0].resize(global.levels()).unwrap();

    let mut group = c.benchmark_group("dissimilarity");
    for metric in MetricId::ALL {
        group.bench_with_input(BenchmarkId::from_parameter(metric), &metric, |b, &m| {
            b.iter(|| graph_dissimilarity(black_box(&epoch), black_box(&global), m).unwrap())
        });
    }
    group.finish();
}

fn bench_detector(c: &mut Criterion) {
    let train = weekly_series(60, 7);
    let test = weekly_series(15, 8);
    let params = DetectorParams::new(MetricId::Hamming);
    let (model, _) = build_model(&train, &params).unwrap();

    let mut group = c.benchmark_group("detector");
    group.sample_size(20);
    group.bench_function("build_60_weeks", |b| {
        b.iter(|| build_model(black_box(&train), &params).unwrap())
    });
    group.bench_function("predict_15_weeks", |b| {
        b.iter(|| predict(&model, black_box(&test)).unwrap())
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_discretization,
    bench_graphs,
    bench_metrics,
    bench_detector
);
criterion_main!(benches);
