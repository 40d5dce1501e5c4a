use criterion::{criterion_group, criterion_main, Criterion};
use witt_core::arith::rat_int;
use witt_core::harness::burnside_window;
use witt_core::octahedron::{model_rep, verify_octahedron_model};
use witt_core::witt::{verify_composite_defects, verify_current_closure, WeightParam};

fn suites(c: &mut Criterion) {
    let w = WeightParam::new(rat_int(1)).unwrap();
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    g.bench_function("defects K=6", |b| b.iter(|| verify_composite_defects(&w, 6).unwrap()));
    g.bench_function("currents K=6", |b| b.iter(|| verify_current_closure(&w, 6).unwrap()));
    g.bench_function("octahedron model", |b| {
        let t = model_rep();
        b.iter(|| verify_octahedron_model(&t).unwrap())
    });
    g.bench_function("burnside window N=6 with tensor", |b| b.iter(|| burnside_window(&w, 6).unwrap()));
    g.finish();
}

criterion_group!(benches, suites);
criterion_main!(benches);
