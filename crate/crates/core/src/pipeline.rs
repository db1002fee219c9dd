//! Glue between parsed logs and the geometric stages: station calibration,
//! trajectory assembly in a common frame, and the sync → pose chain.

use crate::align::{calibrate_station_pair, AlignmentResult};
use crate::error::{Error, Result};
use crate::ingest::{geodetic_to_enu, rts_to_cartesian, GeodeticOrigin, GnssLog, RtsLog};
use crate::model::{frame, frames, FrameId, RigidTransform, TargetId, TargetKind, TargetTrajectory, TimedPoint, Timestamp};
use crate::pose::{reconstruct_trajectory, BodyCalibration, ReconstructedTrajectory};
use crate::sync::{synchronize, SyncPolicy, Synchronized};

/// Extrinsics of one station relative to the reference (first) station.
#[derive(Debug, Clone, PartialEq)]
pub struct StationSolution {
    pub station: FrameId,
    /// Station frame into the reference station frame.
    pub transform: RigidTransform,
    /// `None` for the reference station itself.
    pub alignment: Option<AlignmentResult>,
    pub warning: Option<String>,
}

impl StationSolution {
    pub fn rmse(&self) -> f64 {
        self.alignment.as_ref().map_or(0.0, |a| a.rmse)
    }
}

fn gcp_points(log: &RtsLog) -> Vec<TimedPoint> {
    log.observations.iter().map(rts_to_cartesian).collect()
}

/// Chains every station pairwise onto the first one from their shots of
/// the same control points (same order in every log).
pub fn calibrate_stations(shots: &[RtsLog]) -> Result<Vec<StationSolution>> {
    let Some(reference) = shots.first() else {
        return Err(Error::TooFewPoints { required: 1, got: 0 });
    };
    let ref_points = gcp_points(reference);
    let mut out = vec![StationSolution {
        station: reference.station.clone(),
        transform: RigidTransform::identity(reference.station.clone(), reference.station.clone()),
        alignment: None,
        warning: None,
    }];
    for log in &shots[1..] {
        if out.iter().any(|s| s.station == log.station) {
            return Err(Error::Invalid(format!("station `{}` listed twice", log.station)));
        }
        let cal = calibrate_station_pair(&ref_points, &gcp_points(log))?;
        out.push(StationSolution {
            station: log.station.clone(),
            transform: cal.alignment.transform.clone(),
            alignment: Some(cal.alignment),
            warning: cal.warning,
        });
    }
    Ok(out)
}

fn by_target<T>(items: Vec<(TargetId, T)>, kind: TargetKind) -> Result<[T; 3]> {
    let mut slots: [Option<T>; 3] = [None, None, None];
    for (id, item) in items {
        if id.kind() != kind {
            return Err(Error::Invalid(format!("unexpected target {id}")));
        }
        if slots[id.index()].is_some() {
            return Err(Error::Invalid(format!("target {id} appears in more than one log")));
        }
        slots[id.index()] = Some(item);
    }
    match slots {
        [Some(a), Some(b), Some(c)] => Ok([a, b, c]),
        _ => Err(Error::Invalid("exactly three target logs are required".into())),
    }
}

/// Converts RTS logs into per-prism trajectories in the reference station frame.
pub fn rts_trajectories(logs: &[RtsLog], stations: &[StationSolution]) -> Result<[TargetTrajectory; 3]> {
    let common = stations
        .first()
        .map(|s| s.station.clone())
        .ok_or(Error::TooFewPoints { required: 1, got: 0 })?;
    let mut items = Vec::with_capacity(logs.len());
    for log in logs {
        let target = log
            .target
            .ok_or_else(|| Error::Invalid(format!("RTS log of `{}` names no target", log.station)))?;
        let solution = stations
            .iter()
            .find(|s| s.station == log.station)
            .ok_or_else(|| Error::Invalid(format!("station `{}` has no calibration", log.station)))?;
        let to_common = solution.transform.clone().with_frames(log.station.clone(), common.clone());
        let samples = log
            .observations
            .iter()
            .map(|o| (o.t, to_common.apply(&rts_to_cartesian(o).p)))
            .collect();
        items.push((target, TargetTrajectory::new(target, common.clone(), samples)?));
    }
    by_target(items, TargetKind::Prism)
}

/// Converts GNSS logs into per-antenna ENU trajectories, keeping only admitted fixes.
///
/// Returns the trajectories and how many fixes the quality gate removed.
pub fn gnss_trajectories(
    logs: &[GnssLog],
    origin: &GeodeticOrigin,
    admit_float: bool,
) -> Result<([TargetTrajectory; 3], usize)> {
    let mut rejected = 0;
    let mut items = Vec::with_capacity(logs.len());
    for log in logs {
        let target = log.target.ok_or_else(|| Error::Invalid("GNSS log names no target".into()))?;
        let samples = log
            .fixes
            .iter()
            .filter(|f| {
                let ok = f.quality.admitted(admit_float);
                rejected += usize::from(!ok);
                ok
            })
            .map(|f| (f.t, geodetic_to_enu(f, origin).p))
            .collect();
        items.push((target, TargetTrajectory::new(target, frame(frames::ENU), samples)?));
    }
    Ok((by_target(items, TargetKind::GnssAntenna)?, rejected))
}

/// Shifts all streams so the first sample of stream 0 is at t = 0.
///
/// Returns the subtracted epoch.
pub fn rebase_epoch(streams: &mut [TargetTrajectory; 3]) -> Result<f64> {
    let epoch = *streams[0]
        .times()
        .first()
        .ok_or(Error::TooFewPoints { required: 2, got: 0 })?;
    for s in streams.iter_mut() {
        let samples = s.samples().map(|(t, p)| (Timestamp(t.0 - epoch), *p)).collect();
        *s = TargetTrajectory::new(s.target(), s.frame().clone(), samples)?;
    }
    Ok(epoch)
}

/// Triplets and poses for one system of one experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct SystemRun {
    pub epoch: f64,
    pub sync: Synchronized,
    pub reconstruction: ReconstructedTrajectory,
}

/// Rebases, synchronizes and reconstructs poses from three target streams.
pub fn run_system(
    mut streams: [TargetTrajectory; 3],
    calib: &BodyCalibration,
    policy: &SyncPolicy,
    reject_threshold: f64,
) -> Result<SystemRun> {
    if streams[0].target().kind() != calib.kind() {
        return Err(Error::Invalid("body calibration does not match the target kind".into()));
    }
    let epoch = rebase_epoch(&mut streams)?;
    let world = streams[0].frame().clone();
    let sync = synchronize([&streams[0], &streams[1], &streams[2]], policy)?;
    let reconstruction = reconstruct_trajectory(&sync.triplets, calib, &world, reject_threshold);
    Ok(SystemRun { epoch, sync, reconstruction })
}
