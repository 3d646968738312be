use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use fluxsim_core::{spectrum_1d, spectrum_2d, wkb_splitting, CircuitParams, FluxConfig, PhaseGrid1D, PhaseGrid2D};

fn one_d(c: &mut Criterion) {
    let p = CircuitParams::two_cell(2.0, 0.5, 0.15).unwrap();
    let g = PhaseGrid1D::default_two_cell();
    c.bench_function("spectrum_1d n=2001 k=4", |b| b.iter(|| spectrum_1d(&p, black_box(1.0), 4, &g).unwrap()));
}

fn two_d(c: &mut Criterion) {
    let p = CircuitParams::new(20.0, 22.0, 0.5, 0.15).unwrap();
    let flux = FluxConfig::trapped_fluxon(1.0);
    let g = PhaseGrid2D::around_vertices(&flux, 101).unwrap();
    let mut group = c.benchmark_group("spectrum_2d");
    group.sample_size(10);
    group.bench_function("n=101 k=12", |b| b.iter(|| spectrum_2d(&p, black_box(&flux), 12, &g).unwrap()));
    group.finish();
}

fn wkb(c: &mut Criterion) {
    let p = CircuitParams::two_cell(15.0, 1.0, 0.15).unwrap();
    c.bench_function("wkb_splitting beta=100", |b| b.iter(|| wkb_splitting(black_box(&p), 1.0).unwrap()));
}

criterion_group!(benches, one_d, two_d, wkb);
criterion_main!(benches);
