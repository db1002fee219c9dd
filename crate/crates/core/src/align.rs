//! Closed-form least-squares rigid registration of corresponding point sets.
//!
//! Minimizes `Σ ‖R·sᵢ + t − dᵢ‖²` over proper rotations `R` and translations
//! `t` (no scale, equal weights) through the SVD of the cross-covariance of
//! the centered sets, with the sign of the last singular direction chosen so
//! that `det(R) = +1`.

use nalgebra::{DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::model::{is_finite, FrameId, Point3, RigidTransform, TimedPoint};

/// Smallest accepted ratio between the second and the first singular value
/// of the centered source points.
pub const DEGENERACY_THRESHOLD: f64 = 1e-9;

/// Recommended size of a ground-control-point set.
pub const GCP_RECOMMENDED: std::ops::RangeInclusive<usize> = 8..=12;

/// Paired source and destination points.
#[derive(Debug, Clone, PartialEq)]
pub struct Correspondences {
    source: Vec<Point3>,
    destination: Vec<Point3>,
    source_frame: FrameId,
    destination_frame: FrameId,
}

impl Correspondences {
    pub fn new(
        source: Vec<Point3>,
        destination: Vec<Point3>,
        source_frame: FrameId,
        destination_frame: FrameId,
    ) -> Result<Correspondences> {
        if source.len() != destination.len() {
            return Err(Error::LengthMismatch { left: source.len(), right: destination.len() });
        }
        if source.len() < 3 {
            return Err(Error::TooFewPoints { required: 3, got: source.len() });
        }
        if !source.iter().chain(&destination).all(is_finite) {
            return Err(Error::NonFinite("correspondence"));
        }
        Ok(Correspondences { source, destination, source_frame, destination_frame })
    }

    pub fn len(&self) -> usize {
        self.source.len()
    }

    pub fn is_empty(&self) -> bool {
        self.source.is_empty()
    }

    pub fn source(&self) -> &[Point3] {
        &self.source
    }

    pub fn destination(&self) -> &[Point3] {
        &self.destination
    }
}

/// Output of a registration.
#[derive(Debug, Clone, PartialEq)]
pub struct AlignmentResult {
    /// Maps the source frame into the destination frame.
    pub transform: RigidTransform,
    pub rmse: f64,
    /// `‖R·sᵢ + t − dᵢ‖` for every correspondence, in input order.
    pub per_point_residuals: Vec<f64>,
}

fn centroid(points: &[Point3]) -> Point3 {
    points.iter().sum::<Point3>() / points.len() as f64
}

/// Ratio of the second to the first singular value of the centered points.
///
/// Zero for collinear (or coincident) sets. Computed from the SVD of the
/// `n × 3` centered matrix itself so that exactly collinear input does not
/// pick up the rounding noise of a squared scatter matrix.
pub fn conditioning_ratio(points: &[Point3]) -> f64 {
    let c = centroid(points);
    let centered = DMatrix::from_fn(points.len(), 3, |i, j| points[i][j] - c[j]);
    let mut sv: Vec<f64> = centered.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    if sv[0] == 0.0 {
        0.0
    } else {
        sv[1] / sv[0]
    }
}

/// Least-squares proper rigid transform taking the source points onto the destination points.
pub fn estimate_rigid_transform(c: &Correspondences) -> Result<AlignmentResult> {
    let ratio = conditioning_ratio(&c.source);
    if !(ratio > DEGENERACY_THRESHOLD) {
        return Err(Error::Degenerate { ratio, threshold: DEGENERACY_THRESHOLD });
    }

    let src_mean = centroid(&c.source);
    let dst_mean = centroid(&c.destination);
    let mut cross = Matrix3::zeros();
    for (s, d) in c.source.iter().zip(&c.destination) {
        cross += (d - dst_mean) * (s - src_mean).transpose();
    }

    let svd = cross.svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut correction = Matrix3::identity();
    if (u * v_t).determinant() < 0.0 {
        correction[(2, 2)] = -1.0;
    }
    let rotation = u * correction * v_t;
    let translation = dst_mean - rotation * src_mean;

    let transform = RigidTransform::from_parts_unchecked(
        rotation,
        translation,
        c.source_frame.clone(),
        c.destination_frame.clone(),
    );
    let per_point_residuals: Vec<f64> = c
        .source
        .iter()
        .zip(&c.destination)
        .map(|(s, d)| (transform.apply(s) - d).norm())
        .collect();
    Ok(AlignmentResult { rmse: rmse(&per_point_residuals), transform, per_point_residuals })
}

pub(crate) fn rmse(residuals: &[f64]) -> f64 {
    (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt()
}

/// Station-pair extrinsic calibration from shared ground control points.
#[derive(Debug, Clone, PartialEq)]
pub struct StationCalibration {
    /// Maps the frame of `gcp_b` into the frame of `gcp_a`.
    pub alignment: AlignmentResult,
    /// Set when the number of control points is outside the recommended 8 to 12.
    pub warning: Option<String>,
}

/// Estimates the transform from station b's frame into station a's frame.
///
/// Both lists must enumerate the same physical control points in the same order.
pub fn calibrate_station_pair(gcp_a: &[TimedPoint], gcp_b: &[TimedPoint]) -> Result<StationCalibration> {
    if gcp_a.len() != gcp_b.len() {
        return Err(Error::LengthMismatch { left: gcp_b.len(), right: gcp_a.len() });
    }
    let frame_of = |pts: &[TimedPoint]| -> Result<FrameId> {
        let first = pts
            .first()
            .ok_or(Error::TooFewPoints { required: 3, got: 0 })?
            .frame
            .clone();
        if let Some(bad) = pts.iter().find(|p| p.frame != first) {
            return Err(Error::FrameMismatch { expected: first.to_string(), found: bad.frame.to_string() });
        }
        Ok(first)
    };
    let frame_a = frame_of(gcp_a)?;
    let frame_b = frame_of(gcp_b)?;
    let c = Correspondences::new(
        gcp_b.iter().map(|p| p.p).collect(),
        gcp_a.iter().map(|p| p.p).collect(),
        frame_b,
        frame_a,
    )?;
    let alignment = estimate_rigid_transform(&c)?;
    let warning = (!GCP_RECOMMENDED.contains(&c.len())).then(|| {
        format!(
            "{} control points; {} to {} are recommended",
            c.len(),
            GCP_RECOMMENDED.start(),
            GCP_RECOMMENDED.end()
        )
    });
    Ok(StationCalibration { alignment, warning })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{rot_z, rotation_angle_between, Timestamp};

    fn f(name: &str) -> FrameId {
        FrameId::new(name).unwrap()
    }

    fn corr(src: &[Point3], dst: &[Point3]) -> Correspondences {
        Correspondences::new(src.to_vec(), dst.to_vec(), f("src"), f("dst")).unwrap()
    }

    fn tetra() -> Vec<Point3> {
        vec![
            Point3::new(1.0, 0.0, 0.0),
            Point3::new(0.0, 1.0, 0.0),
            Point3::new(0.0, 0.0, 1.0),
            Point3::new(0.0, 0.0, 0.0),
        ]
    }

    #[test]
    fn identical_sets_give_identity() {
        let r = estimate_rigid_transform(&corr(&tetra(), &tetra())).unwrap();
        assert!((r.transform.rotation() - Matrix3::identity()).amax() < 1e-15);
        assert!(r.transform.translation().amax() < 1e-15);
        assert!(r.rmse < 1e-15);
    }

    #[test]
    fn pure_translation() {
        let shift = Point3::new(1.0, 2.0, 3.0);
        let dst: Vec<Point3> = tetra().iter().map(|p| p + shift).collect();
        let r = estimate_rigid_transform(&corr(&tetra(), &dst)).unwrap();
        assert!((r.transform.rotation() - Matrix3::identity()).amax() < 1e-12);
        assert!((r.transform.translation() - shift).amax() < 1e-12);
        assert!(r.rmse < 1e-12);
    }

    #[test]
    fn recovers_rz90_plus_shift() {
        let truth = RigidTransform::new(
            rot_z(std::f64::consts::FRAC_PI_2),
            Point3::new(5.0, 0.0, 0.0),
            f("src"),
            f("dst"),
        )
        .unwrap();
        let dst: Vec<Point3> = tetra().iter().map(|p| truth.apply(p)).collect();
        assert!((dst[0] - Point3::new(5.0, 1.0, 0.0)).amax() < 1e-15);
        let r = estimate_rigid_transform(&corr(&tetra(), &dst)).unwrap();
        assert!((r.transform.rotation() - truth.rotation()).amax() < 1e-12);
        assert!((r.transform.translation() - truth.translation()).amax() < 1e-12);
        assert!(r.rmse <= 1e-12);
        assert_eq!(r.transform.from_frame(), &f("src"));
        assert_eq!(r.transform.to_frame(), &f("dst"));
    }

    #[test]
    fn collinear_source_is_degenerate() {
        let line = [Point3::new(0.0, 0.0, 0.0), Point3::new(1.0, 0.0, 0.0), Point3::new(2.0, 0.0, 0.0)];
        let err = estimate_rigid_transform(&corr(&line, &line)).unwrap_err();
        match err {
            Error::Degenerate { ratio, threshold } => {
                assert!(ratio < threshold);
                assert_eq!(threshold, DEGENERACY_THRESHOLD);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn too_few_and_mismatched_inputs() {
        let two = vec![Point3::zeros(), Point3::x()];
        assert!(matches!(
            Correspondences::new(two.clone(), two, f("a"), f("b")),
            Err(Error::TooFewPoints { required: 3, got: 2 })
        ));
        assert!(matches!(
            Correspondences::new(tetra(), tetra()[..3].to_vec(), f("a"), f("b")),
            Err(Error::LengthMismatch { left: 4, right: 3 })
        ));
    }

    #[test]
    fn residuals_match_rmse() {
        let mut dst = tetra();
        dst[0].x += 0.01;
        dst[2].z -= 0.02;
        let r = estimate_rigid_transform(&corr(&tetra(), &dst)).unwrap();
        let mean_sq = r.per_point_residuals.iter().map(|v| v * v).sum::<f64>() / 4.0;
        assert!((r.rmse - mean_sq.sqrt()).abs() < 1e-12);
        assert!(r.rmse > 0.0);
    }

    fn gcp_circle(n: usize, radius: f64) -> Vec<Point3> {
        (0..n)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / n as f64;
                Point3::new(radius * a.cos(), radius * a.sin(), 0.3 * (3.0 * a).sin())
            })
            .collect()
    }

    fn timed(points: &[Point3], frame: &str) -> Vec<TimedPoint> {
        points
            .iter()
            .enumerate()
            .map(|(i, p)| TimedPoint::new(Timestamp(i as f64), *p, f(frame)).unwrap())
            .collect()
    }

    #[test]
    fn station_pair_identity_and_known_offset() {
        let a = gcp_circle(10, 20.0);
        let cal = calibrate_station_pair(&timed(&a, "s0"), &timed(&a, "s1")).unwrap();
        assert!(cal.alignment.rmse < 1e-12);
        assert!(cal.warning.is_none());

        // frame b is frame a rotated 17° about z and offset by (3, -2, 0.1)
        let a_to_b = RigidTransform::new(
            rot_z(17f64.to_radians()),
            Point3::new(3.0, -2.0, 0.1),
            f("s0"),
            f("s1"),
        )
        .unwrap();
        let b: Vec<Point3> = a.iter().map(|p| a_to_b.inverse().apply(p)).collect();
        let cal = calibrate_station_pair(&timed(&a, "s0"), &timed(&b, "s1")).unwrap();
        let est = &cal.alignment.transform;
        assert_eq!(est.from_frame(), &f("s1"));
        assert_eq!(est.to_frame(), &f("s0"));
        assert!(rotation_angle_between(est.rotation(), a_to_b.rotation()) < 1e-10);
        assert!((est.translation() - a_to_b.translation()).norm() < 1e-10);
        assert!(cal.alignment.rmse <= 1e-10);
    }

    #[test]
    fn station_pair_warns_outside_recommended_range() {
        let a = gcp_circle(4, 20.0);
        let cal = calibrate_station_pair(&timed(&a, "s0"), &timed(&a, "s1")).unwrap();
        assert!(cal.warning.is_some());
        let a5 = gcp_circle(5, 20.0);
        assert!(calibrate_station_pair(&timed(&a, "s0"), &timed(&a5, "s1")).is_err());
    }
}
