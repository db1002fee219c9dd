//! Geometric and temporal value types shared by every stage of the pipeline.
//!
//! Positions are meters, times are seconds, angles are radians. Rotations are
//! stored as 3x3 matrices; quaternions only appear at I/O boundaries.

use std::fmt;
use std::sync::Arc;

use nalgebra::{Matrix3, Rotation3, UnitQuaternion, Vector3};
use serde::Serialize;

use crate::error::{Error, Result};

/// A 3-D position in meters.
pub type Point3 = Vector3<f64>;

/// Orthonormality drift above which a composed rotation is re-projected onto SO(3).
pub const ORTHONORMAL_DRIFT: f64 = 1e-12;
/// Tolerance used when validating a rotation matrix.
pub const ROTATION_TOLERANCE: f64 = 1e-9;

/// Seconds since the experiment epoch.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize)]
pub struct Timestamp(pub f64);

impl Timestamp {
    pub fn secs(self) -> f64 {
        self.0
    }
}

impl From<f64> for Timestamp {
    fn from(s: f64) -> Self {
        Timestamp(s)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Name of a coordinate frame. Cheap to clone; compared by exact string equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FrameId(Arc<str>);

impl FrameId {
    pub fn new(name: impl AsRef<str>) -> Result<FrameId> {
        let name = name.as_ref();
        if name.is_empty() {
            return Err(Error::Invalid("frame name must be non-empty".into()));
        }
        Ok(FrameId(Arc::from(name)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for FrameId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Well-known frame names.
pub mod frames {
    pub const BODY: &str = "body";
    pub const ENU: &str = "enu@origin";
}

pub(crate) fn frame(name: &str) -> FrameId {
    FrameId::new(name).expect("static frame names are non-empty")
}

/// One timestamped position of a tracked target.
#[derive(Debug, Clone, PartialEq)]
pub struct TimedPoint {
    pub t: Timestamp,
    pub p: Point3,
    pub frame: FrameId,
}

impl TimedPoint {
    pub fn new(t: Timestamp, p: Point3, frame: FrameId) -> Result<TimedPoint> {
        if !t.0.is_finite() {
            return Err(Error::NonFinite("timestamp"));
        }
        if !is_finite(&p) {
            return Err(Error::NonFinite("point"));
        }
        Ok(TimedPoint { t, p, frame })
    }
}

pub fn is_finite(p: &Point3) -> bool {
    p.iter().all(|v| v.is_finite())
}

/// Which measurement system a target belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TargetKind {
    Prism,
    GnssAntenna,
}

impl TargetKind {
    fn token(self) -> &'static str {
        match self {
            TargetKind::Prism => "prism",
            TargetKind::GnssAntenna => "gnss",
        }
    }
}

/// One of the three prisms or three antennas on the platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TargetId {
    kind: TargetKind,
    index: u8,
}

impl TargetId {
    pub fn new(kind: TargetKind, index: usize) -> Result<TargetId> {
        if index > 2 {
            return Err(Error::Invalid(format!("target index {index} is not in 0..=2")));
        }
        Ok(TargetId { kind, index: index as u8 })
    }

    pub fn prism(index: usize) -> Result<TargetId> {
        TargetId::new(TargetKind::Prism, index)
    }

    pub fn antenna(index: usize) -> Result<TargetId> {
        TargetId::new(TargetKind::GnssAntenna, index)
    }

    pub fn kind(self) -> TargetKind {
        self.kind
    }

    pub fn index(self) -> usize {
        self.index as usize
    }
}

impl fmt::Display for TargetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.token(), self.index)
    }
}

impl std::str::FromStr for TargetId {
    type Err = Error;

    /// Parses `prism<0|1|2>` or `gnss<0|1|2>`.
    fn from_str(s: &str) -> Result<TargetId> {
        let (kind, rest) = if let Some(rest) = s.strip_prefix("prism") {
            (TargetKind::Prism, rest)
        } else if let Some(rest) = s.strip_prefix("gnss") {
            (TargetKind::GnssAntenna, rest)
        } else {
            return Err(Error::Invalid(format!("unknown target `{s}`")));
        };
        match rest {
            "0" => TargetId::new(kind, 0),
            "1" => TargetId::new(kind, 1),
            "2" => TargetId::new(kind, 2),
            _ => Err(Error::Invalid(format!("unknown target `{s}`"))),
        }
    }
}

/// Proper rigid transform `p -> rotation * p + translation` from one frame into another.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidTransform {
    rotation: Matrix3<f64>,
    translation: Point3,
    from: FrameId,
    to: FrameId,
}

impl RigidTransform {
    /// Builds a transform, rejecting matrices that are not proper rotations
    /// within [`ROTATION_TOLERANCE`].
    pub fn new(
        rotation: Matrix3<f64>,
        translation: Point3,
        from: FrameId,
        to: FrameId,
    ) -> Result<RigidTransform> {
        if !rotation.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite("rotation"));
        }
        if !is_finite(&translation) {
            return Err(Error::NonFinite("translation"));
        }
        let drift = orthonormal_drift(&rotation);
        let det = rotation.determinant();
        if drift > ROTATION_TOLERANCE || (det - 1.0).abs() > ROTATION_TOLERANCE {
            return Err(Error::Invalid(format!(
                "not a proper rotation (orthonormality drift {drift:e}, det {det})"
            )));
        }
        Ok(RigidTransform { rotation, translation, from, to })
    }

    pub(crate) fn from_parts_unchecked(
        rotation: Matrix3<f64>,
        translation: Point3,
        from: FrameId,
        to: FrameId,
    ) -> RigidTransform {
        RigidTransform { rotation, translation, from, to }
    }

    pub fn identity(from: FrameId, to: FrameId) -> RigidTransform {
        RigidTransform {
            rotation: Matrix3::identity(),
            translation: Point3::zeros(),
            from,
            to,
        }
    }

    /// Builds a transform from a (not necessarily normalized) quaternion `w, x, y, z`.
    pub fn from_quaternion(
        wxyz: [f64; 4],
        translation: Point3,
        from: FrameId,
        to: FrameId,
    ) -> Result<RigidTransform> {
        let q = nalgebra::Quaternion::new(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
        let norm = q.norm();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::Invalid("quaternion has zero or non-finite norm".into()));
        }
        let unit = UnitQuaternion::from_quaternion(q);
        RigidTransform::new(*unit.to_rotation_matrix().matrix(), translation, from, to)
    }

    /// Rotation as a unit quaternion `w, x, y, z` with `w >= 0`.
    pub fn quaternion(&self) -> [f64; 4] {
        let rot = Rotation3::from_matrix_unchecked(self.rotation);
        let q = UnitQuaternion::from_rotation_matrix(&rot);
        let q = if q.w < 0.0 { -q.into_inner() } else { q.into_inner() };
        [q.w, q.i, q.j, q.k]
    }

    pub fn rotation(&self) -> &Matrix3<f64> {
        &self.rotation
    }

    pub fn translation(&self) -> &Point3 {
        &self.translation
    }

    pub fn from_frame(&self) -> &FrameId {
        &self.from
    }

    pub fn to_frame(&self) -> &FrameId {
        &self.to
    }

    /// Same transform with relabelled frames.
    pub fn with_frames(mut self, from: FrameId, to: FrameId) -> RigidTransform {
        self.from = from;
        self.to = to;
        self
    }

    pub fn apply(&self, p: &Point3) -> Point3 {
        self.rotation * p + self.translation
    }

    pub fn inverse(&self) -> RigidTransform {
        let rt = self.rotation.transpose();
        RigidTransform {
            translation: -(rt * self.translation),
            rotation: rt,
            from: self.to.clone(),
            to: self.from.clone(),
        }
    }

    /// `self ∘ other`: maps `other.from` into `self.to`.
    pub fn compose(&self, other: &RigidTransform) -> Result<RigidTransform> {
        if self.from != other.to {
            return Err(Error::FrameMismatch {
                expected: self.from.to_string(),
                found: other.to.to_string(),
            });
        }
        let mut rotation = self.rotation * other.rotation;
        if orthonormal_drift(&rotation) > ORTHONORMAL_DRIFT {
            rotation = nearest_rotation(&rotation);
        }
        Ok(RigidTransform {
            rotation,
            translation: self.rotation * other.translation + self.translation,
            from: other.from.clone(),
            to: self.to.clone(),
        })
    }
}

/// Largest absolute entry of `Rᵀ·R − I`.
pub fn orthonormal_drift(r: &Matrix3<f64>) -> f64 {
    (r.transpose() * r - Matrix3::identity()).amax()
}

/// Projects a matrix onto the closest proper rotation (Frobenius norm).
pub fn nearest_rotation(m: &Matrix3<f64>) -> Matrix3<f64> {
    let svd = m.svd(true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    let mut d = Matrix3::identity();
    if (u * v_t).determinant() < 0.0 {
        d[(2, 2)] = -1.0;
    }
    u * d * v_t
}

/// Rotation about +z by `angle` radians.
pub fn rot_z(angle: f64) -> Matrix3<f64> {
    let (s, c) = angle.sin_cos();
    Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Geodesic angle in radians between two rotations.
///
/// Uses `atan2` on the skew and trace parts of `aᵀ·b`, which stays accurate
/// for angles far below `sqrt(f64::EPSILON)`.
pub fn rotation_angle_between(a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
    let m = a.transpose() * b;
    let skew = Vector3::new(m[(2, 1)] - m[(1, 2)], m[(0, 2)] - m[(2, 0)], m[(1, 0)] - m[(0, 1)]);
    let sin = 0.5 * skew.norm();
    let cos = 0.5 * (m.trace() - 1.0);
    sin.atan2(cos)
}

/// Time-ordered positions of one target, all expressed in one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetTrajectory {
    target: TargetId,
    frame: FrameId,
    times: Vec<f64>,
    points: Vec<Point3>,
}

impl TargetTrajectory {
    /// Builds a trajectory; timestamps must be finite and strictly increasing.
    pub fn new(
        target: TargetId,
        frame: FrameId,
        samples: Vec<(Timestamp, Point3)>,
    ) -> Result<TargetTrajectory> {
        let mut times = Vec::with_capacity(samples.len());
        let mut points = Vec::with_capacity(samples.len());
        for (t, p) in samples {
            if !t.0.is_finite() {
                return Err(Error::NonFinite("timestamp"));
            }
            if !is_finite(&p) {
                return Err(Error::NonFinite("trajectory sample"));
            }
            if let Some(&prev) = times.last() {
                if t.0 <= prev {
                    return Err(Error::Invalid(format!(
                        "{target}: timestamps not strictly increasing ({prev} then {})",
                        t.0
                    )));
                }
            }
            times.push(t.0);
            points.push(p);
        }
        Ok(TargetTrajectory { target, frame, times, points })
    }

    /// Builds a trajectory from timed points, which must all share one frame.
    pub fn from_timed_points(target: TargetId, points: &[TimedPoint]) -> Result<TargetTrajectory> {
        let Some(first) = points.first() else {
            return Err(Error::TooFewPoints { required: 1, got: 0 });
        };
        let frame = first.frame.clone();
        if let Some(bad) = points.iter().find(|tp| tp.frame != frame) {
            return Err(Error::FrameMismatch {
                expected: frame.to_string(),
                found: bad.frame.to_string(),
            });
        }
        TargetTrajectory::new(target, frame, points.iter().map(|tp| (tp.t, tp.p)).collect())
    }

    pub fn target(&self) -> TargetId {
        self.target
    }

    pub fn frame(&self) -> &FrameId {
        &self.frame
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn points(&self) -> &[Point3] {
        &self.points
    }

    pub fn samples(&self) -> impl Iterator<Item = (Timestamp, &Point3)> + '_ {
        self.times.iter().map(|&t| Timestamp(t)).zip(self.points.iter())
    }

    /// Applies a frame change to every sample.
    pub fn transformed(&self, transform: &RigidTransform) -> Result<TargetTrajectory> {
        if transform.from_frame() != &self.frame {
            return Err(Error::FrameMismatch {
                expected: transform.from_frame().to_string(),
                found: self.frame.to_string(),
            });
        }
        Ok(TargetTrajectory {
            target: self.target,
            frame: transform.to_frame().clone(),
            times: self.times.clone(),
            points: self.points.iter().map(|p| transform.apply(p)).collect(),
        })
    }

    /// Keeps only the samples for which `keep(index)` is true.
    pub(crate) fn retain_indices(&self, keep: &[bool]) -> TargetTrajectory {
        let (times, points) = self
            .times
            .iter()
            .zip(&self.points)
            .zip(keep)
            .filter(|(_, &k)| k)
            .map(|((t, p), _)| (*t, *p))
            .unzip();
        TargetTrajectory {
            target: self.target,
            frame: self.frame.clone(),
            times,
            points,
        }
    }
}

/// Platform pose at one instant: body frame into world frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Pose {
    pub t: Timestamp,
    pub transform: RigidTransform,
    pub residual_rmse: f64,
    /// Set when `residual_rmse` exceeded the rejection threshold. Flagged poses are kept.
    pub outlier: bool,
}
