//! Time alignment of the three asynchronous target streams.
//!
//! Each stream is linearly interpolated at a common set of reference
//! timestamps. Interpolation is never extrapolated and never bridges a gap
//! longer than [`SyncPolicy::max_gap`]; reference times where any stream
//! fails are omitted rather than guessed.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{FrameId, Point3, TargetTrajectory, Timestamp};

/// Where the common timestamps come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reference {
    /// Timestamps of the target-0 stream.
    Stream0,
    /// Regular grid with the given step (s), spanning the overlap of all streams.
    Grid { step: f64 },
}

impl fmt::Display for Reference {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Reference::Stream0 => f.write_str("stream0"),
            Reference::Grid { step } => write!(f, "grid:{step}"),
        }
    }
}

impl std::str::FromStr for Reference {
    type Err = Error;

    /// Parses `stream0` or `grid:<step>`.
    fn from_str(s: &str) -> Result<Reference> {
        if s == "stream0" {
            return Ok(Reference::Stream0);
        }
        if let Some(step) = s.strip_prefix("grid:") {
            let step: f64 = step
                .parse()
                .map_err(|_| Error::Invalid(format!("bad grid step in `{s}`")))?;
            if !(step > 0.0 && step.is_finite()) {
                return Err(Error::Invalid(format!("grid step must be > 0, got {step}")));
            }
            return Ok(Reference::Grid { step });
        }
        Err(Error::Invalid(format!("unknown reference `{s}`; expected stream0 or grid:<step>")))
    }
}

/// Interpolation and filtering parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SyncPolicy {
    /// Longest bracketing interval (s) that may be interpolated across.
    pub max_gap: f64,
    pub reference: Reference,
    /// Implied speed (m/s) between consecutive samples above which the later
    /// sample is dropped. `None` disables the gate.
    pub max_speed: Option<f64>,
}

impl Default for SyncPolicy {
    fn default() -> Self {
        SyncPolicy { max_gap: 1.0, reference: Reference::Stream0, max_speed: Some(5.0) }
    }
}

impl SyncPolicy {
    pub fn validate(&self) -> Result<()> {
        if !(self.max_gap > 0.0 && self.max_gap.is_finite()) {
            return Err(Error::Invalid(format!("max_gap must be > 0, got {}", self.max_gap)));
        }
        if let Reference::Grid { step } = self.reference {
            if !(step > 0.0 && step.is_finite()) {
                return Err(Error::Invalid(format!("grid step must be > 0, got {step}")));
            }
        }
        if let Some(v) = self.max_speed {
            if !(v > 0.0) {
                return Err(Error::Invalid(format!("max_speed must be > 0, got {v}")));
            }
        }
        Ok(())
    }
}

/// The three target positions at one common instant, in one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct SyncTriplet {
    pub t: Timestamp,
    pub points: [Point3; 3],
}

impl SyncTriplet {
    pub fn centroid(&self) -> Point3 {
        (self.points[0] + self.points[1] + self.points[2]) / 3.0
    }
}

/// Position of `traj` at time `t` by linear interpolation between the bracketing samples.
pub fn interpolate_at(traj: &TargetTrajectory, t: Timestamp, policy: &SyncPolicy) -> Result<Point3> {
    let times = traj.times();
    let points = traj.points();
    if times.len() < 2 {
        return Err(Error::TooFewPoints { required: 2, got: times.len() });
    }
    let t = t.0;
    let (first, last) = (times[0], times[times.len() - 1]);
    if !(t >= first && t <= last) {
        return Err(Error::OutOfRange { t, first, last });
    }
    let hi = times.partition_point(|&x| x < t);
    if times[hi] == t {
        return Ok(points[hi]);
    }
    let lo = hi - 1;
    let gap = times[hi] - times[lo];
    if gap > policy.max_gap {
        return Err(Error::Gap { t, gap, max_gap: policy.max_gap });
    }
    let alpha = (t - times[lo]) / gap;
    Ok(points[lo] + (points[hi] - points[lo]) * alpha)
}

/// Drops every sample whose implied speed from the last kept sample exceeds `max_speed`.
///
/// Returns the filtered trajectory and the number of samples removed.
pub fn speed_gate(traj: &TargetTrajectory, max_speed: f64) -> (TargetTrajectory, usize) {
    let times = traj.times();
    let points = traj.points();
    let mut keep = vec![false; times.len()];
    let mut last: Option<usize> = None;
    for i in 0..times.len() {
        let ok = match last {
            None => true,
            Some(j) => (points[i] - points[j]).norm() <= max_speed * (times[i] - times[j]),
        };
        if ok {
            keep[i] = true;
            last = Some(i);
        }
    }
    let dropped = keep.iter().filter(|k| !**k).count();
    (traj.retain_indices(&keep), dropped)
}

/// Triplets plus bookkeeping about what was discarded.
#[derive(Debug, Clone, PartialEq)]
pub struct Synchronized {
    pub triplets: Vec<SyncTriplet>,
    /// Samples removed by the speed gate, per stream.
    pub speed_gated: [usize; 3],
    /// Reference timestamps omitted because a stream could not be interpolated.
    pub omitted: usize,
}

fn check_streams(streams: [&TargetTrajectory; 3]) -> Result<FrameId> {
    let frame = streams[0].frame().clone();
    for (i, s) in streams.iter().enumerate() {
        if s.frame() != &frame {
            return Err(Error::FrameMismatch { expected: frame.to_string(), found: s.frame().to_string() });
        }
        if s.target().index() != i || s.target().kind() != streams[0].target().kind() {
            return Err(Error::Invalid(format!(
                "stream {i} carries target {}; expected index {i} of one kind",
                s.target()
            )));
        }
        if s.len() < 2 {
            return Err(Error::TooFewPoints { required: 2, got: s.len() });
        }
    }
    Ok(frame)
}

/// Builds synchronous triplets, returning the discard counts as well.
pub fn synchronize(streams: [&TargetTrajectory; 3], policy: &SyncPolicy) -> Result<Synchronized> {
    policy.validate()?;
    check_streams(streams)?;

    let mut speed_gated = [0; 3];
    let gated: Vec<TargetTrajectory> = match policy.max_speed {
        Some(v) => streams
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let (g, n) = speed_gate(s, v);
                speed_gated[i] = n;
                g
            })
            .collect(),
        None => streams.iter().map(|s| (*s).clone()).collect(),
    };
    for g in &gated {
        if g.len() < 2 {
            return Err(Error::TooFewPoints { required: 2, got: g.len() });
        }
    }

    let reference: Vec<f64> = match policy.reference {
        Reference::Stream0 => gated[0].times().to_vec(),
        Reference::Grid { step } => {
            let start = gated.iter().map(|g| g.times()[0]).fold(f64::NEG_INFINITY, f64::max);
            let end = gated.iter().map(|g| g.times()[g.len() - 1]).fold(f64::INFINITY, f64::min);
            if end < start {
                Vec::new()
            } else {
                let n = ((end - start) / step).floor() as usize;
                (0..=n).map(|k| start + k as f64 * step).filter(|&t| t <= end).collect()
            }
        }
    };

    let mut triplets = Vec::with_capacity(reference.len());
    let mut omitted = 0;
    for &t in &reference {
        let t = Timestamp(t);
        let p = (
            interpolate_at(&gated[0], t, policy),
            interpolate_at(&gated[1], t, policy),
            interpolate_at(&gated[2], t, policy),
        );
        match p {
            (Ok(p0), Ok(p1), Ok(p2)) => triplets.push(SyncTriplet { t, points: [p0, p1, p2] }),
            _ => omitted += 1,
        }
    }
    Ok(Synchronized { triplets, speed_gated, omitted })
}

/// Synchronous triplets at the policy's reference timestamps, sorted by time.
pub fn form_triplets(
    t0: &TargetTrajectory,
    t1: &TargetTrajectory,
    t2: &TargetTrajectory,
    policy: &SyncPolicy,
) -> Result<Vec<SyncTriplet>> {
    synchronize([t0, t1, t2], policy).map(|s| s.triplets)
}
