use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use reform_core::extbp::{default_lambda, to_qubo, EbpInstance};
use reform_core::qaoa::{run, CostTable, QaoaConfig, StateVector};

fn qubo_table(name: &str) -> CostTable {
    let inst = EbpInstance::builtin(name).unwrap();
    let l = default_lambda(&inst);
    let enc = to_qubo(&inst, l, l).unwrap();
    CostTable::build(&enc.poly, enc.qubit_count).unwrap()
}

fn layers(c: &mut Criterion) {
    let mut g = c.benchmark_group("layer");
    g.sample_size(20);
    for name in ["A", "B", "C"] {
        let table = qubo_table(name);
        let mut state = StateVector::uniform(table.num_qubits());
        g.bench_with_input(BenchmarkId::new("evolve_p1", table.num_qubits()), &table, |b, t| {
            b.iter(|| state.evolve_in_place(black_box(&[0.7, 0.3]), t))
        });
    }
    g.finish();
}

fn sampling(c: &mut Criterion) {
    let table = qubo_table("C");
    let mut state = StateVector::uniform(table.num_qubits());
    state.evolve_in_place(&[0.7, 0.3], &table);
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    c.bench_function("sample_10_shots_20q", |b| b.iter(|| state.sample(10, &mut rng)));
}

fn table_build(c: &mut Criterion) {
    let inst = EbpInstance::builtin("C").unwrap();
    let enc = to_qubo(&inst, 12.0, 12.0).unwrap();
    let mut g = c.benchmark_group("cost_table");
    g.sample_size(10);
    g.bench_function("build_20q", |b| b.iter(|| CostTable::build(black_box(&enc.poly), 20).unwrap()));
    g.finish();
}

fn full_run(c: &mut Criterion) {
    let table = qubo_table("A");
    let cfg = QaoaConfig::default();
    let mut g = c.benchmark_group("run");
    g.sample_size(10);
    g.bench_function("qaoa_run_15q", |b| b.iter(|| run(&table, &cfg, 0).unwrap()));
    g.finish();
}

criterion_group!(benches, layers, sampling, table_build, full_run);
criterion_main!(benches);
