//! Six-DOF platform poses from synchronous target triplets.

use crate::align::{conditioning_ratio, estimate_rigid_transform, Correspondences, DEGENERACY_THRESHOLD};
use crate::error::{Error, Result};
use crate::model::{frame, frames, is_finite, FrameId, Point3, Pose, TargetKind};
use crate::sync::SyncTriplet;

/// Residual RMSE (m) above which a pose is flagged as an outlier.
pub const DEFAULT_REJECT_THRESHOLD: f64 = 0.05;

/// Smallest accepted area (m²) of the calibrated target triangle.
pub const MIN_TRIANGLE_AREA: f64 = 1e-6;

/// Lab-measured positions of the three targets in the body frame.
#[derive(Debug, Clone, PartialEq)]
pub struct BodyCalibration {
    kind: TargetKind,
    points: [Point3; 3],
}

impl BodyCalibration {
    pub fn new(kind: TargetKind, points: [Point3; 3]) -> Result<BodyCalibration> {
        if !points.iter().all(is_finite) {
            return Err(Error::NonFinite("body calibration"));
        }
        let area = 0.5 * (points[1] - points[0]).cross(&(points[2] - points[0])).norm();
        if !(area > MIN_TRIANGLE_AREA) {
            return Err(Error::Invalid(format!(
                "calibrated targets are collinear (triangle area {area:e} m²)"
            )));
        }
        Ok(BodyCalibration { kind, points })
    }

    pub fn kind(&self) -> TargetKind {
        self.kind
    }

    pub fn points(&self) -> &[Point3; 3] {
        &self.points
    }

    /// Calibrated inter-target distances `[d01, d02, d12]`.
    pub fn pairwise_distances(&self) -> [f64; 3] {
        let p = &self.points;
        [(p[0] - p[1]).norm(), (p[0] - p[2]).norm(), (p[1] - p[2]).norm()]
    }
}

/// Index pairs in the canonical `(01, 02, 12)` order.
pub const PAIRS: [(usize, usize); 3] = [(0, 1), (0, 2), (1, 2)];

/// Aligns the calibrated triangle onto a measured triplet expressed in `world`.
pub fn reconstruct_pose(
    triplet: &SyncTriplet,
    calib: &BodyCalibration,
    world: &FrameId,
    reject_threshold: f64,
) -> Result<Pose> {
    let c = Correspondences::new(
        calib.points.to_vec(),
        triplet.points.to_vec(),
        frame(frames::BODY),
        world.clone(),
    )?;
    // the calibration is non-degenerate by construction; the triplet may not be
    let ratio = conditioning_ratio(&triplet.points);
    if !(ratio > DEGENERACY_THRESHOLD) {
        return Err(Error::Degenerate { ratio, threshold: DEGENERACY_THRESHOLD });
    }
    let fit = estimate_rigid_transform(&c)?;
    Ok(Pose {
        t: triplet.t,
        outlier: fit.rmse > reject_threshold,
        residual_rmse: fit.rmse,
        transform: fit.transform,
    })
}

/// Poses for a whole triplet sequence; failures are collected by index.
#[derive(Debug, Clone, PartialEq)]
pub struct ReconstructedTrajectory {
    pub poses: Vec<Pose>,
    pub failures: Vec<(usize, Error)>,
}

impl ReconstructedTrajectory {
    pub fn outlier_count(&self) -> usize {
        self.poses.iter().filter(|p| p.outlier).count()
    }
}

pub fn reconstruct_trajectory(
    triplets: &[SyncTriplet],
    calib: &BodyCalibration,
    world: &FrameId,
    reject_threshold: f64,
) -> ReconstructedTrajectory {
    let mut poses = Vec::with_capacity(triplets.len());
    let mut failures = Vec::new();
    for (i, tr) in triplets.iter().enumerate() {
        match reconstruct_pose(tr, calib, world, reject_threshold) {
            Ok(p) => poses.push(p),
            Err(e) => failures.push((i, e)),
        }
    }
    ReconstructedTrajectory { poses, failures }
}
