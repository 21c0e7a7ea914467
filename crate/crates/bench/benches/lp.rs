use std::hint::black_box;

use approxdeg::pipeline::certify_ed;
use approxdeg::rational::rat;
use approxdeg::zoo::{make_and, make_ed, make_ptp};
use approxdeg::{approx_degree, min_error_at_degree, LpOptions, Sided};
use criterion::{criterion_group, criterion_main, Criterion};

fn lp(c: &mut Criterion) {
    let opts = LpOptions::default();
    let and4 = make_and(4).unwrap();
    let ed3 = make_ed(3, 3).unwrap();
    let ptp4 = make_ptp(4, &rat(1, 2)).unwrap();
    c.bench_function("and4_degree_2", |b| {
        b.iter(|| min_error_at_degree(black_box(&and4), 2, Sided::Two, &opts).unwrap())
    });
    c.bench_function("ed3_degree_search", |b| {
        b.iter(|| approx_degree(black_box(&ed3), &rat(1, 3), Sided::Two, &opts).unwrap())
    });
    c.bench_function("ptp4_one_sided_search", |b| {
        b.iter(|| approx_degree(black_box(&ptp4), &rat(1, 3), Sided::One, &opts).unwrap())
    });
    let full = LpOptions::full_basis();
    c.bench_function("ed3_degree_2_full_basis", |b| {
        b.iter(|| min_error_at_degree(black_box(&ed3), 2, Sided::Two, &full).unwrap())
    });
    c.bench_function("certify_ed_4_2", |b| b.iter(|| certify_ed(4, 2, &rat(1, 3), &opts).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = lp
}
criterion_main!(benches);
