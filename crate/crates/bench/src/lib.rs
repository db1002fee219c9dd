//! Deterministic inputs for the benchmarks.

use prismtrack_core::pipeline::{calibrate_stations, rts_trajectories};
use prismtrack_core::synth::sample_observations;
use prismtrack_core::{BodyCalibration, Correspondences, FrameId, NoiseModel, PathKind, PathSpec, Point3, Scenario, TargetTrajectory};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `n` noisy correspondences under a fixed rigid motion.
pub fn correspondences(n: usize, seed: u64) -> Correspondences {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (c, s) = (0.7f64.cos(), 0.7f64.sin());
    let source: Vec<Point3> =
        (0..n).map(|_| Point3::new(rng.random_range(-20.0..20.0), rng.random_range(-20.0..20.0), rng.random_range(-2.0..2.0))).collect();
    let destination = source
        .iter()
        .map(|p| Point3::new(c * p.x - s * p.y + 5.0, s * p.x + c * p.y - 3.0, p.z + 0.5) + Point3::new(rng.random_range(-1e-3..1e-3), 0.0, 0.0))
        .collect();
    Correspondences::new(source, destination, FrameId::new("a").unwrap(), FrameId::new("b").unwrap()).unwrap()
}

/// Two clouds of `n` anchors spread over a site of `extent` meters.
pub fn anchor_clouds(n: usize, extent: f64, seed: u64) -> (Vec<Point3>, Vec<Point3>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cloud = || -> Vec<Point3> {
        (0..n)
            .map(|_| Point3::new(rng.random_range(0.0..extent), rng.random_range(0.0..extent), rng.random_range(-1.0..1.0)))
            .collect()
    };
    (cloud(), cloud())
}

/// Calibrated RTS streams of a simulated lawnmower survey with `samples` shots per prism.
pub fn rts_streams(samples: usize, seed: u64) -> ([TargetTrajectory; 3], BodyCalibration) {
    let duration = (samples - 1) as f64 / 2.5;
    let path = PathSpec::new(PathKind::Lawnmower { leg_length: 20.0, spacing: 3.0 }, 1.0, duration, 2.5)
        .with_origin(Point3::new(5.0, 4.0, -1.0));
    let scenario = Scenario::standard(path, NoiseModel { seed, ..NoiseModel::default() }).unwrap();
    let exp = sample_observations(&scenario).unwrap();
    let stations = calibrate_stations(&exp.gcp_shots).unwrap();
    (rts_trajectories(&exp.rts, &stations).unwrap(), scenario.prisms)
}
