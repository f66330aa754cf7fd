use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use falsetheta_core::kloosterman::kloosterman_row;
use falsetheta_core::rademacher::partial_sum;
use falsetheta_core::special_functions::bessel_i1;
use falsetheta_core::{CoefficientParams, Quadrature};

fn kloosterman(c: &mut Criterion) {
    c.bench_function("kloosterman_row k=97 N=10", |b| {
        b.iter(|| kloosterman_row(black_box(97), 3, 10, 10, 1).unwrap())
    });
}

fn rademacher(c: &mut Criterion) {
    let params = CoefficientParams::new(5, 8, 10).unwrap();
    let quad = Quadrature::default();
    let mut group = c.benchmark_group("partial_sum");
    group.sample_size(10);
    group.bench_function("(5,8,10) J=20", |b| {
        b.iter(|| partial_sum(black_box(&params), 20, &quad).unwrap())
    });
    group.finish();
}

fn bessel(c: &mut Criterion) {
    c.bench_function("bessel_i1 sweep", |b| {
        b.iter(|| {
            (0..100)
                .map(|i| bessel_i1(black_box(i as f64 * 0.3)).unwrap())
                .sum::<f64>()
        })
    });
}

criterion_group!(benches, kloosterman, rademacher, bessel);
criterion_main!(benches);
