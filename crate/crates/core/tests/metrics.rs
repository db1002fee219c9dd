use prismtrack_core::metrics::flatten;
use prismtrack_core::model::rot_z;
use prismtrack_core::{
    inter_distance_errors, nn_match, summarize, BodyCalibration, FrameId, MatchPair, Point3, RigidTransform, SyncTriplet,
    TargetKind, Timestamp,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn brute_force(a: &[Point3], b: &[Point3], radius: f64) -> Vec<MatchPair> {
    let mut out = Vec::new();
    for (i, p) in a.iter().enumerate() {
        let mut best: Option<(f64, usize)> = None;
        for (j, q) in b.iter().enumerate() {
            let (dx, dy, dz) = (p.x - q.x, p.y - q.y, p.z - q.z);
            let d2 = dx * dx + dy * dy + dz * dz;
            if best.is_none_or(|(bd, _)| d2 < bd) {
                best = Some((d2, j));
            }
        }
        if let Some((d2, j)) = best {
            if d2.sqrt() <= radius {
                out.push(MatchPair { index_a: i, index_b: j, separation: d2.sqrt() });
            }
        }
    }
    out
}

#[test]
fn grid_search_equals_exhaustive_search() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for round in 0..20 {
        let n = rng.random_range(1..=2000);
        let m = rng.random_range(1..=2000);
        let extent = rng.random_range(5.0..200.0);
        let pt = |rng: &mut ChaCha8Rng| {
            Point3::new(rng.random_range(-extent..extent), rng.random_range(-extent..extent), rng.random_range(-2.0..2.0))
        };
        let a: Vec<Point3> = (0..n).map(|_| pt(&mut rng)).collect();
        let mut b: Vec<Point3> = (0..m).map(|_| pt(&mut rng)).collect();
        // duplicates in b force tie-breaks
        if round % 2 == 0 {
            let dup: Vec<Point3> = b.iter().step_by(7).copied().collect();
            b.extend(dup);
        }
        assert_eq!(nn_match(&a, &b, 2.0).unwrap(), brute_force(&a, &b, 2.0));
    }
}

#[test]
fn lattice_points_on_the_radius_match() {
    let a: Vec<Point3> = (0..50).map(|k| Point3::new(2.0 * k as f64, 0.0, 0.0)).collect();
    let b: Vec<Point3> = (0..50).map(|k| Point3::new(2.0 * k as f64 + 1.0, 0.0, 0.0)).collect();
    let got = nn_match(&a, &b, 1.0).unwrap();
    assert_eq!(got, brute_force(&a, &b, 1.0));
    assert_eq!(got.len(), 50);
    assert!(got.iter().skip(1).all(|m| m.index_b + 1 == m.index_a));
}

#[test]
fn half_normal_median() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let draws: Vec<f64> = (0..1_000_000).map(|_| rng.sample(StandardNormal)).collect();
    let s = summarize(&draws).unwrap();
    assert!((s.median - 0.6745).abs() < 0.01);
    assert!((s.q1 - 0.3186).abs() < 0.01);
    assert!((s.q3 - 1.1503).abs() < 0.01);
}

#[test]
fn inter_distance_errors_ignore_rigid_motion() {
    let calib = BodyCalibration::new(
        TargetKind::Prism,
        [Point3::new(0.4, 0.35, 0.55), Point3::new(0.4, -0.35, 0.75), Point3::new(-0.45, 0.0, 0.95)],
    )
    .unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let body = FrameId::new("body").unwrap();
    let world = FrameId::new("w").unwrap();
    let triplets: Vec<SyncTriplet> = (0..100)
        .map(|k| SyncTriplet {
            t: Timestamp(k as f64),
            points: calib.points().map(|p| p + Point3::new(rng.random_range(-0.01..0.01), 0.0, rng.random_range(-0.01..0.01))),
        })
        .collect();
    let g = RigidTransform::new(rot_z(1.1), Point3::new(300.0, -40.0, 7.0), body, world).unwrap();
    let moved: Vec<SyncTriplet> =
        triplets.iter().map(|tr| SyncTriplet { t: tr.t, points: tr.points.map(|p| g.apply(&p)) }).collect();
    let a = flatten(&inter_distance_errors(&triplets, &calib));
    let b = flatten(&inter_distance_errors(&moved, &calib));
    for (x, y) in a.iter().zip(&b) {
        assert!((x - y).abs() < 1e-12);
    }
}
