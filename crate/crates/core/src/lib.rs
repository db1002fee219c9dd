//! Ground-truth trajectories from robotic total stations (RTS) and RTK-GNSS.
//!
//! Three prisms tracked by three total stations, or three RTK antennas, are
//! rigidly mounted on a platform. This crate turns their raw logs into
//! six-DOF poses and measures how precise and how reproducible the two
//! systems are:
//!
//! 1. [`ingest`] parses the logs and converts polar shots and geodetic
//!    fixes into Cartesian positions.
//! 2. [`align`] is the closed-form point-to-point registration, used both
//!    for station extrinsics from ground control points and for poses.
//! 3. [`sync`] interpolates the asynchronous streams onto common timestamps.
//! 4. [`pose`] aligns the lab-calibrated target triangle onto each triplet.
//! 5. [`metrics`] computes inter-distance errors, nearest-neighbor matches
//!    between experiments, inter-experiment disparities and their summaries.
//! 6. [`synth`] simulates deployments with known truth.

// `!(x > limit)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod align;
pub mod error;
pub mod files;
pub mod ingest;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod pose;
pub mod sync;
pub mod synth;

pub use align::{calibrate_station_pair, estimate_rigid_transform, AlignmentResult, Correspondences};
pub use error::{Error, Result};
pub use ingest::{FixQuality, GeodeticOrigin, GnssFix, RtsObservation};
pub use metrics::{
    inter_distance_errors, inter_experiment_errors, nn_match, summarize, InterDistanceRecord, MatchAnchor,
    MatchPair, MetricSummary,
};
pub use model::{FrameId, Point3, Pose, RigidTransform, TargetId, TargetKind, TargetTrajectory, TimedPoint, Timestamp};
pub use pose::{reconstruct_pose, reconstruct_trajectory, BodyCalibration};
pub use sync::{form_triplets, interpolate_at, Reference, SyncPolicy, SyncTriplet};
pub use synth::{NoiseModel, PathKind, PathSpec, Scenario};
