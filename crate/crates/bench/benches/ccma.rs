use std::hint::black_box;
use std::path::PathBuf;

use ccma::optimizer::{optimize, Criterion as Crit, Scope, SearchConfig, Strategy};
use ccma::{CcmaInstance, Elem, RunConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn build(name: &str) -> CcmaInstance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    RunConfig::from_json(&std::fs::read_to_string(path).unwrap()).unwrap().build().unwrap()
}

fn multiply(c: &mut Criterion) {
    let inst = build("design_a.json");
    let alg = inst.algorithm();
    let x = [Elem(1), Elem(2), Elem(3), Elem(0)];
    let y = [Elem(3), Elem(3), Elem(1), Elem(2)];
    c.bench_function("multiply", |b| b.iter(|| alg.multiply(black_box(&x), black_box(&y))));
    c.bench_function("multiply_power", |b| b.iter(|| alg.multiply_power(black_box(&x), black_box(&y))));
}

fn construct(c: &mut Criterion) {
    let cfg = RunConfig::from_json(
        &std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/kernel.json")).unwrap(),
    )
    .unwrap();
    c.bench_function("construct_kernel_type", |b| b.iter(|| cfg.build().unwrap()));
}

fn search(c: &mut Criterion) {
    let inst = build("kernel.json");
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let mut cfg = SearchConfig::new(Crit::Zeros, Scope::Joint, Strategy::ExhaustiveProjective);
    cfg.budget = 50_000;
    group.bench_function("exhaustive_50k", |b| b.iter(|| optimize(&inst, &cfg, 1).unwrap()));
    let greedy = SearchConfig::new(Crit::Zeros, Scope::CodeFirst, Strategy::GreedyMinweight);
    group.bench_function("greedy", |b| b.iter(|| optimize(&inst, &greedy, 1).unwrap()));
    group.finish();
}

criterion_group!(benches, multiply, construct, search);
criterion_main!(benches);
