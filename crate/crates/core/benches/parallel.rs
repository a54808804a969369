//! Rayon pool with one thread against the default pool on the parallel hot paths.
//! Build with `--no-default-features` to measure the plain sequential fallback instead.

use cdindex::artinian::hilbert_over_seeds;
use cdindex::complex::order_complex;
use cdindex::constructions::{barycentric, cross_polytope, cube};
use cdindex::flag::flag_f;
use cdindex::homology::reisner_cm;
use cdindex::linalg::Field;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rayon::ThreadPoolBuilder;

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        (
            "1-thread",
            ThreadPoolBuilder::new().num_threads(1).build().unwrap(),
        ),
        ("default", ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn bench(c: &mut Criterion) {
    let bary = barycentric(&cube(3).unwrap());
    let cross = cross_polytope(4).unwrap();
    let delta = order_complex(&cross);
    let small = order_complex(&cube(3).unwrap());

    let mut g = c.benchmark_group("flag_f");
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            pool.install(|| b.iter(|| flag_f(&bary).unwrap()))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("reisner_cm");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            pool.install(|| b.iter(|| reisner_cm(&delta, Field::Rational).holds))
        });
    }
    g.finish();

    let mut g = c.benchmark_group("hilbert_over_seeds");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            pool.install(|| {
                b.iter(|| hilbert_over_seeds(&small, 3, Field::Prime(32003), &[1, 2, 3]))
            })
        });
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
