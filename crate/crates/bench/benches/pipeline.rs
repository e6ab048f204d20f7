use criterion::{criterion_group, criterion_main, Criterion};
use lspk_core::catalog::{catalog_build, Params};
use lspk_core::decomposition::decompose;
use lspk_core::forms::koszul_form;
use lspk_core::geometry::tangent_bundle_ricci;
use lspk_core::search::{builtin_system, newton_search};
use lspk_core::{MetricAlgebra, Tolerance};
use std::hint::black_box;

fn dim5() -> lspk_core::AlgebraStructure {
    catalog_build("lspk_dim5", &Params::new()).unwrap().algebra
}

fn bench_decompose(c: &mut Criterion) {
    let a = dim5();
    c.bench_function("decompose dim5", |b| {
        b.iter(|| decompose(black_box(&a), Tolerance::default()).unwrap())
    });
}

fn bench_ricci(c: &mut Criterion) {
    let a = dim5();
    let m = MetricAlgebra::new(a.clone(), koszul_form(&a), Tolerance::default()).unwrap();
    c.bench_function("tangent bundle ricci dim5", |b| {
        b.iter(|| tangent_bundle_ricci(black_box(&m), Tolerance::default()).unwrap())
    });
}

fn bench_search(c: &mut Criterion) {
    let sys = builtin_system("dim5").unwrap();
    c.bench_function("newton search dim5 grid 32", |b| {
        b.iter(|| newton_search(black_box(&sys), &[(-1.0, 1.0), (-1.0, 1.0)], 32).unwrap())
    });
}

criterion_group!(benches, bench_decompose, bench_ricci, bench_search);
criterion_main!(benches);
