use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use reform_core::extbp::{brute_force, to_pubo, to_qubo, EbpInstance};
use reform_core::model::{canonicalize, Relation};
use reform_core::pbf::{Polynomial, VarId};
use reform_core::reformulate::{eq_penalty, product_penalty, reduce_to_quadratic, PRODUCT_UB_CAP};

fn encodings(c: &mut Criterion) {
    let inst = EbpInstance::builtin("C").unwrap();
    c.bench_function("pubo_c", |b| b.iter(|| to_pubo(black_box(&inst), 12.0, 12.0).unwrap()));
    c.bench_function("qubo_c", |b| b.iter(|| to_qubo(black_box(&inst), 12.0, 12.0).unwrap()));
    c.bench_function("brute_force_c", |b| b.iter(|| brute_force(black_box(&inst)).unwrap()));
}

fn penalties(c: &mut Criterion) {
    let vars: Vec<VarId> = (0..16).map(VarId).collect();
    c.bench_function("eq_penalty_16_8", |b| b.iter(|| eq_penalty(black_box(&vars), 8).unwrap()));

    let lhs = Polynomial::linear((0..8).map(|i| (VarId(i), if i % 2 == 0 { 1.0 } else { -1.0 })), 0.0);
    let con = canonicalize(Relation::Le, &lhs, 1).unwrap().remove(0);
    c.bench_function("product_penalty_8", |b| b.iter(|| product_penalty(black_box(&con), PRODUCT_UB_CAP).unwrap()));

    let a = EbpInstance::builtin("A").unwrap();
    let pubo = to_pubo(&a, 8.0, 8.0).unwrap().poly;
    c.bench_function("quadratize_a", |b| b.iter(|| reduce_to_quadratic(black_box(&pubo), 8.0)));
}

criterion_group!(benches, encodings, penalties);
criterion_main!(benches);
