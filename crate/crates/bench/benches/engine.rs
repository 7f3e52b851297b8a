use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use luka_bench::{cut_cube, interval_family, nested_formulas};
use luka_core::consequence::{semantic_consequence, stable_consequence, Theory};
use luka_core::geometry::{lp_min, AffineFn};
use luka_core::{compile, parse, Rat};
use std::hint::black_box;

fn compile_bench(c: &mut Criterion) {
    let formulas = nested_formulas(12);
    let mut group = c.benchmark_group("compile");
    for depth in [4, 8, 12] {
        let f = &formulas[depth - 1];
        group.bench_with_input(BenchmarkId::from_parameter(depth), f, |b, f| b.iter(|| compile(black_box(f), 3).unwrap()));
    }
    group.finish();
}

fn lp_bench(c: &mut Criterion) {
    let region = cut_cube(3, 6);
    let objective = AffineFn::new(Rat::zero(), vec![Rat::one(), Rat::from_int(-2), Rat::new(1, 3)]);
    c.bench_function("lp_min cut cube", |b| b.iter(|| lp_min(black_box(&objective), black_box(&region))));
}

fn consequence_bench(c: &mut Criterion) {
    let psi = parse("!(X1*X1)").unwrap();
    let family = interval_family(20);
    c.bench_function("semantic family 3..20", |b| b.iter(|| semantic_consequence(black_box(&family), &psi).unwrap()));
    let theory = Theory::new(vec![parse("X1 -> X2").unwrap(), parse("!(X2 * X2)").unwrap()]);
    let query = parse("X1 + X1 -> X2 + X2").unwrap();
    c.bench_function("stable two variables", |b| b.iter(|| stable_consequence(black_box(&theory), &query).unwrap()));
}

criterion_group!(benches, compile_bench, lp_bench, consequence_bench);
criterion_main!(benches);
