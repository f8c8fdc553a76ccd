use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use davenport_bench::{dihedral_witness, group, rank_power_witness};
use davenport_core::solver::compute_consecutive_unweighted_fast;
use davenport_core::{compute_consecutive, is_free, step, Element, PowTable, SearchConfig, WeightSet, WindowState};

fn bench_step(c: &mut Criterion) {
    let g = group("A[2,6,6]");
    let w = WeightSet::explicit(&[1, 2, 4, 5], 6).unwrap();
    let pow = PowTable::new(&g, &w);
    let mut state = WindowState::initial(g.order());
    for x in [7, 19, 40] {
        state = step(&g, &state, Element(x), &pow);
    }
    c.bench_function("step/A[2,6,6]", |b| b.iter(|| step(&g, black_box(&state), Element(23), &pow)));
}

fn bench_is_free(c: &mut Criterion) {
    let (s, w) = dihedral_witness();
    c.bench_function("is_free/dihedral-15", |b| b.iter(|| is_free(black_box(&s), &w)));
    let (s, w) = rank_power_witness();
    c.bench_function("is_free/rank-power-7", |b| b.iter(|| is_free(black_box(&s), &w)));
}

fn bench_compute(c: &mut Criterion) {
    let cfg = SearchConfig::deterministic();
    let c13 = group("C13");
    let squares = WeightSet::unit_powers(13, 2).unwrap();
    c.bench_function("compute_c/C13-squares", |b| b.iter(|| compute_consecutive(&c13, &squares, &cfg).unwrap()));
    let a55 = group("A[5,5]");
    let full = WeightSet::full(5).unwrap();
    c.bench_function("compute_c/A[5,5]-full", |b| b.iter(|| compute_consecutive(&a55, &full, &cfg).unwrap()));
    let d4 = group("D4");
    let one = WeightSet::unweighted(4).unwrap();
    c.bench_function("compute_c/D4-unweighted", |b| b.iter(|| compute_consecutive(&d4, &one, &cfg).unwrap()));
}

fn bench_fast_path(c: &mut Criterion) {
    let cfg = SearchConfig::deterministic();
    let g = group("P(A[2,2],M(3,2,3,2))");
    c.bench_function("fast_path/order-24", |b| b.iter(|| compute_consecutive_unweighted_fast(&g, &cfg)));
}

criterion_group!(benches, bench_step, bench_is_free, bench_compute, bench_fast_path);
criterion_main!(benches);
