use std::hint::black_box;

use approxdeg::rational::rat;
use approxdeg::sim::{run_ptp_algorithm, sample_no_instance, sample_yes_instance, stream, sweep};
use approxdeg::{AlgoParams, SweepConfig};
use criterion::{criterion_group, criterion_main, Criterion};

fn sim(c: &mut Criterion) {
    let alpha = rat(1, 2);
    c.bench_function("sample_no_instance_4096", |b| {
        let mut rng = stream(1, &[0]);
        b.iter(|| sample_no_instance(black_box(4096), &alpha, &mut rng).unwrap())
    });
    c.bench_function("run_yes_4096", |b| {
        let mut rng = stream(2, &[0]);
        let phi = sample_yes_instance(4096, &mut rng);
        let params = AlgoParams { n: 4096, alpha: alpha.clone(), s: 40, eps: rat(1, 9), seed: 2 };
        b.iter(|| run_ptp_algorithm(black_box(&phi), &params, &mut rng).unwrap())
    });
    c.bench_function("sweep_256_100_trials", |b| {
        let cfg = SweepConfig {
            n_list: vec![256],
            alpha: alpha.clone(),
            eps_list: vec![rat(1, 3)],
            trials: 100,
            seed: 3,
            grid_ratio: 1.5,
        };
        b.iter(|| sweep(black_box(&cfg)).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = sim
}
criterion_main!(benches);
