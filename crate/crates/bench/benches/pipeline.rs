use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use prismtrack_bench::{anchor_clouds, correspondences, rts_streams};
use prismtrack_core::pipeline::run_system;
use prismtrack_core::{estimate_rigid_transform, nn_match, SyncPolicy};

fn registration(c: &mut Criterion) {
    let mut group = c.benchmark_group("estimate_rigid_transform");
    for n in [3, 12, 1000] {
        let input = correspondences(n, 1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &input, |b, input| {
            b.iter(|| estimate_rigid_transform(black_box(input)).unwrap())
        });
    }
    group.finish();
}

fn matching(c: &mut Criterion) {
    let mut group = c.benchmark_group("nn_match");
    for n in [1_000, 10_000, 40_000] {
        let (a, b) = anchor_clouds(n, 400.0, 2);
        group.bench_with_input(BenchmarkId::from_parameter(n), &(a, b), |bench, (a, b)| {
            bench.iter(|| nn_match(black_box(a), black_box(b), 2.0).unwrap())
        });
    }
    group.finish();
}

fn sync_and_poses(c: &mut Criterion) {
    let mut group = c.benchmark_group("sync_and_reconstruct");
    group.sample_size(10);
    for n in [1_000, 40_000] {
        let (streams, calib) = rts_streams(n, 3);
        group.bench_with_input(BenchmarkId::from_parameter(n), &streams, |b, streams| {
            b.iter(|| run_system(streams.clone(), &calib, &SyncPolicy::default(), 0.05).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, registration, matching, sync_and_poses);
criterion_main!(benches);
