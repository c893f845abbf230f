use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;

use elastic_motion::analytics::welch_t_test;
use elastic_motion::registration::{optimal_warping, phase_amplitude_separation, to_srvf, warp_trajectory};
use elastic_motion::synthetic::{curl_template, random_warping};
use elastic_motion::{TimeGrid, Trajectory};

fn warped_copies(n: usize, count: usize, seed: u64) -> Vec<Trajectory> {
    let g = TimeGrid::new(n).unwrap();
    let template = curl_template(&g);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| warp_trajectory(&template, &random_warping(&g, &mut rng, 0.5)).unwrap())
        .collect()
}

fn bench_warping(c: &mut Criterion) {
    let curves = warped_copies(101, 2, 1);
    let (a, b) = (to_srvf(&curves[0]), to_srvf(&curves[1]));
    c.bench_function("optimal_warping n=101", |bench| {
        bench.iter(|| optimal_warping(black_box(&a), black_box(&b)).unwrap())
    });
}

fn bench_mean(c: &mut Criterion) {
    let curves = warped_copies(101, 10, 2);
    let mut group = c.benchmark_group("elastic mean");
    group.sample_size(10);
    group.bench_function("10 curves n=101", |bench| {
        bench.iter(|| phase_amplitude_separation(black_box(&curves)).unwrap())
    });
    group.finish();
}

fn bench_welch(c: &mut Criterion) {
    let a: Vec<f64> = (0..50).map(|i| (i as f64 * 0.37).sin()).collect();
    let b: Vec<f64> = (0..40).map(|i| (i as f64 * 0.53).cos() + 0.2).collect();
    c.bench_function("welch_t_test 50 vs 40", |bench| {
        bench.iter(|| welch_t_test(black_box(&a), black_box(&b)).unwrap())
    });
}

criterion_group!(benches, bench_warping, bench_mean, bench_welch);
criterion_main!(benches);
