use criterion::{criterion_group, criterion_main, Criterion};
use nhtwist_core::rmatrix::TwistParams;
use nhtwist_core::twist::{spacetime_table, star_product, verify_cocycle, TwistContext};
use nhtwist_core::verify::{run_suite, star_jacobi_check, Suite};
use nhtwist_core::{Expr, LieAlgebra, Signature};
use std::hint::black_box;

fn ctx(twist: u8, sig: Signature) -> TwistContext {
    TwistContext::catalog(twist, sig, 3, &TwistParams::symbolic(), 8).unwrap()
}

fn bench_star_product(c: &mut Criterion) {
    let c10 = ctx(10, Signature::NHMinus);
    let c1 = ctx(1, Signature::NHPlus);
    let (x1, x2) = (Expr::x(1), Expr::x(2));
    c.bench_function("star_product twist 10 x1*x2", |b| {
        b.iter(|| black_box(star_product(&x1, &x2, &c10).unwrap()))
    });
    c.bench_function("star_product twist 1 x1*x2", |b| {
        b.iter(|| black_box(star_product(&x1, &x2, &c1).unwrap()))
    });
}

fn bench_tables(c: &mut Criterion) {
    let c13 = ctx(13, Signature::NHPlus);
    c.bench_function("spacetime_table twist 13", |b| {
        b.iter(|| black_box(spacetime_table(&c13).unwrap()))
    });
}

fn bench_verification(c: &mut Criterion) {
    c.bench_function("jacobi nh+ d=3", |b| {
        let alg = LieAlgebra::build(Signature::NHPlus, 3).unwrap();
        b.iter(|| black_box(alg.verify_jacobi().len()))
    });
    c.bench_function("cybe suite", |b| {
        b.iter(|| black_box(run_suite(Suite::Cybe, 8).passed))
    });
    let c11 = ctx(11, Signature::NHPlus);
    c.bench_function("cocycle order 2 twist 11", |b| {
        b.iter(|| black_box(verify_cocycle(&c11, 2).holds()))
    });
    let c14 = ctx(14, Signature::NHMinus);
    c.bench_function("star-jacobi twist 14", |b| {
        b.iter(|| black_box(star_jacobi_check(&c14).unwrap()))
    });
}

criterion_group!(
    benches,
    bench_star_product,
    bench_tables,
    bench_verification
);
criterion_main!(benches);
