//! Seeded synthetic deployments with known ground truth.
//!
//! A scenario describes a platform path, the lab calibration of its prisms
//! and antennas, the three total stations and the control points. Sampling
//! produces what the instruments would have logged: per-station polar
//! observations with their own (offset, jittered) clocks, RTK fixes in
//! geodetic coordinates, and per-station control-point shots.
//!
//! The world frame of a scenario is the frame of the first station, which is
//! also placed at the ENU origin (leveled, north-aligned). Truth poses,
//! reconstructed RTS poses and reconstructed GNSS poses therefore all live
//! in the same frame.
//!
//! Random numbers come from ChaCha8 (`rand_chacha`), seeded with
//! `NoiseModel::seed`; each noise source uses its own ChaCha stream id, so
//! output depends only on the seed and the scenario, never on the platform.

use std::f64::consts::{FRAC_PI_2, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::ingest::{
    cartesian_to_polar, enu_to_geodetic, FixQuality, GeodeticOrigin, GnssFix, GnssLog, RtsLog, RtsObservation,
};
use crate::model::{frame, frames, rot_z, FrameId, Point3, Pose, RigidTransform, TargetId, Timestamp};
use crate::pose::BodyCalibration;

/// Noise magnitudes (m, s) and the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseModel {
    /// Isotropic per-axis standard deviation of RTS target positions.
    pub rts_sigma_xyz: f64,
    pub gnss_sigma_horizontal: f64,
    pub gnss_sigma_vertical: f64,
    /// Standard deviation of RTS timestamp jitter, clamped to ±45% of the period.
    pub timestamp_jitter: f64,
    /// Isotropic per-axis standard deviation of control-point shots.
    pub gcp_sigma: f64,
    /// Magnitude of a constant per-antenna offset (random direction, fixed for
    /// the whole experiment). Stands in for the net effect of constellation and
    /// atmosphere on one deployment.
    pub gnss_bias: f64,
    pub seed: u64,
}

impl Default for NoiseModel {
    fn default() -> Self {
        NoiseModel {
            rts_sigma_xyz: 0.003,
            gnss_sigma_horizontal: 0.010,
            gnss_sigma_vertical: 0.020,
            timestamp_jitter: 0.02,
            gcp_sigma: 0.0005,
            gnss_bias: 0.0,
            seed: 0,
        }
    }
}

impl NoiseModel {
    pub fn noiseless(seed: u64) -> NoiseModel {
        NoiseModel {
            rts_sigma_xyz: 0.0,
            gnss_sigma_horizontal: 0.0,
            gnss_sigma_vertical: 0.0,
            timestamp_jitter: 0.0,
            gcp_sigma: 0.0,
            gnss_bias: 0.0,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let all = [
            self.rts_sigma_xyz,
            self.gnss_sigma_horizontal,
            self.gnss_sigma_vertical,
            self.timestamp_jitter,
            self.gcp_sigma,
            self.gnss_bias,
        ];
        if all.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
            return Err(Error::Invalid("noise magnitudes must be finite and >= 0".into()));
        }
        Ok(())
    }
}

/// Shape of the platform path.
#[derive(Debug, Clone, PartialEq)]
pub enum PathKind {
    /// Straight line from the origin along `heading` (rad from +x, counter-clockwise).
    Line { heading: f64 },
    /// Counter-clockwise circle centered on the origin.
    Circle { radius: f64 },
    /// Back-and-forth legs along +x joined by half-circle turns, advancing along +y.
    Lawnmower { leg_length: f64, spacing: f64 },
    /// Piecewise-linear path through the points (relative to the origin); stops at the last one.
    Waypoints(Vec<Point3>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub kind: PathKind,
    /// m/s
    pub speed: f64,
    /// s
    pub duration: f64,
    /// Hz
    pub rate: f64,
    /// Offset of the whole path in the world frame.
    pub origin: Point3,
}

impl PathSpec {
    pub fn new(kind: PathKind, speed: f64, duration: f64, rate: f64) -> PathSpec {
        PathSpec { kind, speed, duration, rate, origin: Point3::zeros() }
    }

    pub fn with_origin(mut self, origin: Point3) -> PathSpec {
        self.origin = origin;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("speed", self.speed), ("duration", self.duration), ("rate", self.rate)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Invalid(format!("path {name} must be > 0, got {v}")));
            }
        }
        match &self.kind {
            PathKind::Line { heading } if !heading.is_finite() => {
                Err(Error::Invalid("line heading must be finite".into()))
            }
            PathKind::Circle { radius } if !(*radius > 0.0) => {
                Err(Error::Invalid("circle radius must be > 0".into()))
            }
            PathKind::Lawnmower { leg_length, spacing } if !(*leg_length > 0.0 && *spacing > 0.0) => {
                Err(Error::Invalid("lawnmower leg_length and spacing must be > 0".into()))
            }
            PathKind::Waypoints(w) if w.is_empty() => Err(Error::Invalid("waypoint list is empty".into())),
            _ => Ok(()),
        }
    }

    /// Number of nominal samples: `floor(duration · rate) + 1`.
    pub fn sample_count(&self) -> usize {
        (self.duration * self.rate + 1e-9).floor() as usize + 1
    }

    /// Nominal time of sample `k`.
    pub fn nominal_time(&self, k: usize) -> f64 {
        k as f64 / self.rate
    }

    /// Body-origin position and heading (yaw, rad) at time `t`.
    pub fn state_at(&self, t: f64) -> (Point3, f64) {
        let s = self.speed * t;
        let (p, yaw) = match &self.kind {
            PathKind::Line { heading } => {
                (Point3::new(s * heading.cos(), s * heading.sin(), 0.0), *heading)
            }
            PathKind::Circle { radius } => {
                let theta = s / radius;
                (Point3::new(radius * theta.cos(), radius * theta.sin(), 0.0), theta + FRAC_PI_2)
            }
            PathKind::Lawnmower { leg_length, spacing } => lawnmower(s, *leg_length, *spacing),
            PathKind::Waypoints(w) => waypoints(s, w),
        };
        (self.origin + p, yaw)
    }

    /// Pose of the body frame in the world frame at time `t`.
    pub fn pose_at(&self, t: f64) -> RigidTransform {
        let (p, yaw) = self.state_at(t);
        RigidTransform::from_parts_unchecked(rot_z(yaw), p, frame(frames::BODY), frame(WORLD))
    }
}

/// Frame name of synthetic truth.
pub const WORLD: &str = "world";

fn lawnmower(s: f64, leg: f64, spacing: f64) -> (Point3, f64) {
    let r = spacing / 2.0;
    let turn = PI * r;
    let cycle = 2.0 * leg + 2.0 * turn;
    let c = (s / cycle).floor();
    let u = s - c * cycle;
    let y0 = 2.0 * spacing * c;
    if u < leg {
        (Point3::new(u, y0, 0.0), 0.0)
    } else if u < leg + turn {
        let phi = (u - leg) / r;
        let a = phi - FRAC_PI_2;
        (Point3::new(leg + r * a.cos(), y0 + r + r * a.sin(), 0.0), phi)
    } else if u < 2.0 * leg + turn {
        (Point3::new(leg - (u - leg - turn), y0 + spacing, 0.0), PI)
    } else {
        let phi = (u - 2.0 * leg - turn) / r;
        let a = -FRAC_PI_2 - phi;
        (Point3::new(r * a.cos(), y0 + 3.0 * r + r * a.sin(), 0.0), PI - phi)
    }
}

fn waypoints(s: f64, w: &[Point3]) -> (Point3, f64) {
    let mut remaining = s;
    let mut yaw = 0.0;
    for seg in w.windows(2) {
        let d = seg[1] - seg[0];
        let len = d.norm();
        if len == 0.0 {
            continue;
        }
        yaw = d.y.atan2(d.x);
        if remaining <= len {
            return (seg[0] + d * (remaining / len), yaw);
        }
        remaining -= len;
    }
    (w[w.len() - 1], yaw)
}

/// Truth poses at the nominal sample times `k / rate`.
pub fn generate_ground_truth(path: &PathSpec) -> Vec<Pose> {
    (0..path.sample_count())
        .map(|k| {
            let t = path.nominal_time(k);
            Pose { t: Timestamp(t), transform: path.pose_at(t), residual_rmse: 0.0, outlier: false }
        })
        .collect()
}

/// A total station placed in the world.
#[derive(Debug, Clone, PartialEq)]
pub struct Station {
    pub id: FrameId,
    /// Station frame into world frame.
    pub to_world: RigidTransform,
}

impl Station {
    /// Leveled station at `position` whose +Y axis points `yaw` radians
    /// counter-clockwise from world +Y.
    pub fn leveled(id: &str, position: Point3, yaw: f64) -> Result<Station> {
        let id = FrameId::new(id)?;
        let to_world = RigidTransform::new(rot_z(yaw), position, id.clone(), frame(WORLD))?;
        Ok(Station { id, to_world })
    }
}

/// Everything needed to simulate one deployment.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub path: PathSpec,
    pub prisms: BodyCalibration,
    pub antennas: BodyCalibration,
    /// Station `k` tracks prism `k`. The first station defines the world frame
    /// and must sit at the identity.
    pub stations: Vec<Station>,
    /// Control points in the world frame, shot by every station.
    pub gcps: Vec<Point3>,
    pub origin: GeodeticOrigin,
    /// Clock offset (s) of RTS stream `k` is `k · rts_stream_offset`.
    pub rts_stream_offset: f64,
    pub noise: NoiseModel,
}

impl Scenario {
    /// Three leveled stations around a 40 m site, ten control points on a
    /// 25 m circle, prisms at three heights with antennas 15 cm above them,
    /// and an origin near Québec City.
    pub fn standard(path: PathSpec, noise: NoiseModel) -> Result<Scenario> {
        use crate::model::TargetKind;
        let prism_points = [
            Point3::new(0.4, 0.35, 0.55),
            Point3::new(0.4, -0.35, 0.75),
            Point3::new(-0.45, 0.0, 0.95),
        ];
        let antenna_points = prism_points.map(|p| p + Point3::new(0.0, 0.0, 0.15));
        let center = Point3::new(15.0, 12.0, -1.5);
        let gcps = (0..10)
            .map(|i| {
                let a = std::f64::consts::TAU * i as f64 / 10.0;
                center + Point3::new(25.0 * a.cos(), 25.0 * a.sin(), 0.5 * (3.0 * a).sin())
            })
            .collect();
        let rate = path.rate;
        Ok(Scenario {
            path,
            prisms: BodyCalibration::new(TargetKind::Prism, prism_points)?,
            antennas: BodyCalibration::new(TargetKind::GnssAntenna, antenna_points)?,
            stations: vec![
                Station::leveled("station0", Point3::zeros(), 0.0)?,
                Station::leveled("station1", Point3::new(30.0, 0.0, 0.3), 120f64.to_radians())?,
                Station::leveled("station2", Point3::new(15.0, 28.0, -0.2), 240f64.to_radians())?,
            ],
            gcps,
            origin: GeodeticOrigin::from_degrees(46.78, -71.27, 100.0)?,
            rts_stream_offset: 1.0 / (3.0 * rate),
            noise,
        })
    }

    pub fn validate(&self) -> Result<()> {
        self.path.validate()?;
        self.noise.validate()?;
        if self.stations.len() != 3 {
            return Err(Error::Invalid(format!("need exactly 3 stations, got {}", self.stations.len())));
        }
        let first = &self.stations[0].to_world;
        if first.rotation() != &nalgebra::Matrix3::identity() || first.translation() != &Point3::zeros() {
            return Err(Error::Invalid("the first station must coincide with the world frame".into()));
        }
        if self.gcps.len() < 3 {
            return Err(Error::TooFewPoints { required: 3, got: self.gcps.len() });
        }
        if !(self.rts_stream_offset.is_finite() && self.rts_stream_offset >= 0.0) {
            return Err(Error::Invalid("rts_stream_offset must be >= 0".into()));
        }
        Ok(())
    }
}

/// Simulated instrument output for one deployment.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticExperiment {
    pub truth: Vec<Pose>,
    pub rts: Vec<RtsLog>,
    pub gnss: Vec<GnssLog>,
    /// Per station, the control-point shots in `Scenario::gcps` order.
    pub gcp_shots: Vec<RtsLog>,
}

// ChaCha stream ids of the independent noise sources.
const STREAM_RTS: u64 = 1;
const STREAM_GNSS: u64 = 10;
const STREAM_GCP: u64 = 20;
const STREAM_BIAS: u64 = 30;

fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn gaussian3(rng: &mut ChaCha8Rng, sx: f64, sy: f64, sz: f64) -> Point3 {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    let z: f64 = rng.sample(StandardNormal);
    Point3::new(x * sx, y * sy, z * sz)
}

fn polar_shot(
    station: &Station,
    world: &Point3,
    t: f64,
    target: Option<TargetId>,
) -> Result<RtsObservation> {
    let local = station.to_world.inverse().apply(world);
    let (az, el, d) = cartesian_to_polar(&local)?;
    RtsObservation::new(Timestamp(t), az, el, d, station.id.clone(), target)
}

/// Samples the instruments along the scenario path.
///
/// Positions are taken on the continuous path at each stream's own
/// timestamps, so clock offsets and jitter never introduce modelling error.
/// Occlusion is not simulated.
pub fn sample_observations(scenario: &Scenario) -> Result<SyntheticExperiment> {
    scenario.validate()?;
    let path = &scenario.path;
    let noise = &scenario.noise;
    let n = path.sample_count();
    let period = 1.0 / path.rate;
    let max_jitter = 0.45 * period;

    let mut rts = Vec::with_capacity(3);
    for (k, station) in scenario.stations.iter().enumerate() {
        let target = TargetId::prism(k)?;
        let body = scenario.prisms.points()[k];
        let mut rng = rng_for(noise.seed, STREAM_RTS + k as u64);
        let mut observations = Vec::with_capacity(n);
        for j in 0..n {
            let jitter: f64 = rng.sample::<f64, _>(StandardNormal) * noise.timestamp_jitter;
            let t = path.nominal_time(j) + k as f64 * scenario.rts_stream_offset + jitter.clamp(-max_jitter, max_jitter);
            let e = gaussian3(&mut rng, noise.rts_sigma_xyz, noise.rts_sigma_xyz, noise.rts_sigma_xyz);
            let world = path.pose_at(t).apply(&body) + e;
            observations.push(polar_shot(station, &world, t, Some(target))?);
        }
        rts.push(RtsLog { station: station.id.clone(), target: Some(target), observations, skipped: Vec::new() });
    }

    let mut bias_rng = rng_for(noise.seed, STREAM_BIAS);
    let mut gnss = Vec::with_capacity(3);
    for k in 0..3 {
        let target = TargetId::antenna(k)?;
        let body = scenario.antennas.points()[k];
        let bias = if noise.gnss_bias > 0.0 {
            let d = gaussian3(&mut bias_rng, 1.0, 1.0, 1.0);
            d.normalize() * noise.gnss_bias
        } else {
            Point3::zeros()
        };
        let mut rng = rng_for(noise.seed, STREAM_GNSS + k as u64);
        let mut fixes = Vec::with_capacity(n);
        for j in 0..n {
            // receivers time-tag on the shared GNSS epoch grid
            let t = path.nominal_time(j);
            let e = gaussian3(
                &mut rng,
                noise.gnss_sigma_horizontal,
                noise.gnss_sigma_horizontal,
                noise.gnss_sigma_vertical,
            );
            let enu = path.pose_at(t).apply(&body) + bias + e;
            let (lat, lon, h) = enu_to_geodetic(&enu, &scenario.origin);
            fixes.push(GnssFix::new(Timestamp(t), lat, lon, h, FixQuality::RtkFixed, Some(target))?);
        }
        gnss.push(GnssLog { target: Some(target), fixes, skipped: Vec::new() });
    }

    let mut gcp_shots = Vec::with_capacity(3);
    for (k, station) in scenario.stations.iter().enumerate() {
        let mut rng = rng_for(noise.seed, STREAM_GCP + k as u64);
        let observations = scenario
            .gcps
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let world = g + gaussian3(&mut rng, noise.gcp_sigma, noise.gcp_sigma, noise.gcp_sigma);
                polar_shot(station, &world, i as f64, None)
            })
            .collect::<Result<Vec<_>>>()?;
        gcp_shots.push(RtsLog { station: station.id.clone(), target: None, observations, skipped: Vec::new() });
    }

    Ok(SyntheticExperiment { truth: generate_ground_truth(path), rts, gnss, gcp_shots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::{geodetic_to_enu, rts_to_cartesian};
    use crate::model::rotation_angle_between;

    fn line(duration: f64) -> PathSpec {
        PathSpec::new(PathKind::Line { heading: 0.0 }, 1.0, duration, 2.5)
    }

    #[test]
    fn line_truth_counts_and_positions() {
        let truth = generate_ground_truth(&line(10.0));
        assert_eq!(truth.len(), 26);
        for (k, p) in truth.iter().enumerate() {
            let expected = Point3::new(0.4 * k as f64, 0.0, 0.0);
            assert!((p.transform.translation() - expected).amax() < 1e-12);
        }
    }

    #[test]
    fn circle_stays_on_radius() {
        let path = PathSpec::new(PathKind::Circle { radius: 7.5 }, 1.3, 200.0, 2.5)
            .with_origin(Point3::new(3.0, -2.0, 1.0));
        for p in generate_ground_truth(&path) {
            let d = (p.transform.translation() - path.origin).norm();
            assert!((d - 7.5).abs() < 1e-12);
        }
    }

    #[test]
    fn heading_is_tangent() {
        for kind in [
            PathKind::Circle { radius: 5.0 },
            PathKind::Lawnmower { leg_length: 10.0, spacing: 2.0 },
            PathKind::Line { heading: 0.3 },
        ] {
            let path = PathSpec::new(kind, 1.0, 60.0, 2.5);
            let h = 1e-6;
            for k in 1..150 {
                let t = k as f64 * 0.37;
                let (a, yaw) = path.state_at(t - h);
                let (b, _) = path.state_at(t + h);
                let v = (b - a) / (2.0 * h);
                if v.norm() < 0.5 {
                    continue;
                }
                let heading = Point3::new(yaw.cos(), yaw.sin(), 0.0);
                assert!((v.normalize() - heading).norm() < 1e-4, "t={t} v={v:?} yaw={yaw}");
            }
        }
    }

    #[test]
    fn lawnmower_is_continuous() {
        let path = PathSpec::new(PathKind::Lawnmower { leg_length: 10.0, spacing: 2.0 }, 1.0, 100.0, 2.5);
        let mut prev = path.state_at(0.0).0;
        for k in 1..10_000 {
            let p = path.state_at(k as f64 * 0.01).0;
            assert!((p - prev).norm() <= 0.0100001);
            prev = p;
        }
    }

    #[test]
    fn single_waypoint_is_constant() {
        let w = Point3::new(1.0, 2.0, 3.0);
        let path = PathSpec::new(PathKind::Waypoints(vec![w]), 1.0, 5.0, 2.5);
        let truth = generate_ground_truth(&path);
        assert!(truth.iter().all(|p| p.transform.translation() == &w));
        assert!(truth
            .iter()
            .all(|p| rotation_angle_between(p.transform.rotation(), truth[0].transform.rotation()) == 0.0));
    }

    #[test]
    fn waypoints_follow_segments() {
        let path = PathSpec::new(
            PathKind::Waypoints(vec![Point3::zeros(), Point3::new(4.0, 0.0, 0.0), Point3::new(4.0, 3.0, 0.0)]),
            1.0,
            10.0,
            1.0,
        );
        let (p, yaw) = path.state_at(2.0);
        assert!((p - Point3::new(2.0, 0.0, 0.0)).norm() < 1e-12);
        assert_eq!(yaw, 0.0);
        let (p, yaw) = path.state_at(5.0);
        assert!((p - Point3::new(4.0, 1.0, 0.0)).norm() < 1e-12);
        assert!((yaw - FRAC_PI_2).abs() < 1e-12);
        let (p, _) = path.state_at(9.0);
        assert_eq!(p, Point3::new(4.0, 3.0, 0.0));
    }

    fn standard(noise: NoiseModel) -> Scenario {
        let path = line(20.0).with_origin(Point3::new(8.0, 6.0, -1.2));
        Scenario::standard(path, noise).unwrap()
    }

    #[test]
    fn same_seed_same_output() {
        let a = sample_observations(&standard(NoiseModel { seed: 9, ..NoiseModel::default() })).unwrap();
        let b = sample_observations(&standard(NoiseModel { seed: 9, ..NoiseModel::default() })).unwrap();
        assert_eq!(a, b);
        let c = sample_observations(&standard(NoiseModel { seed: 10, ..NoiseModel::default() })).unwrap();
        assert_ne!(a.rts, c.rts);
    }

    #[test]
    fn noiseless_observations_invert_to_world_positions() {
        let s = standard(NoiseModel::noiseless(1));
        let exp = sample_observations(&s).unwrap();
        for (k, log) in exp.rts.iter().enumerate() {
            for obs in &log.observations {
                let local = rts_to_cartesian(obs).p;
                let world = s.stations[k].to_world.apply(&local);
                let truth = s.path.pose_at(obs.t.0).apply(&s.prisms.points()[k]);
                assert!((world - truth).norm() < 1e-9);
            }
        }
        for (k, log) in exp.gnss.iter().enumerate() {
            for fix in &log.fixes {
                let enu = geodetic_to_enu(fix, &s.origin).p;
                let truth = s.path.pose_at(fix.t.0).apply(&s.antennas.points()[k]);
                // one ulp of an ECEF coordinate is ~1e-9 m
                assert!((enu - truth).norm() < 1e-8);
            }
        }
        for (k, log) in exp.gcp_shots.iter().enumerate() {
            for (obs, g) in log.observations.iter().zip(&s.gcps) {
                let world = s.stations[k].to_world.apply(&rts_to_cartesian(obs).p);
                assert!((world - g).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn rts_streams_are_offset_and_increasing() {
        let s = standard(NoiseModel::default());
        let exp = sample_observations(&s).unwrap();
        for (k, log) in exp.rts.iter().enumerate() {
            assert_eq!(log.observations.len(), 51);
            for w in log.observations.windows(2) {
                assert!(w[1].t.0 > w[0].t.0);
            }
            let mean_offset: f64 = log
                .observations
                .iter()
                .enumerate()
                .map(|(j, o)| o.t.0 - j as f64 / 2.5)
                .sum::<f64>()
                / 51.0;
            assert!((mean_offset - k as f64 * s.rts_stream_offset).abs() < 0.01);
        }
    }

    #[test]
    fn gnss_bias_is_constant_per_antenna() {
        let noise = NoiseModel { gnss_bias: 0.1, ..NoiseModel::noiseless(4) };
        let s = standard(noise);
        let exp = sample_observations(&s).unwrap();
        for (k, log) in exp.gnss.iter().enumerate() {
            let offsets: Vec<Point3> = log
                .fixes
                .iter()
                .map(|f| geodetic_to_enu(f, &s.origin).p - s.path.pose_at(f.t.0).apply(&s.antennas.points()[k]))
                .collect();
            assert!((offsets[0].norm() - 0.1).abs() < 1e-8);
            assert!(offsets.iter().all(|o| (o - offsets[0]).norm() < 1e-8));
        }
    }

    #[test]
    fn scenario_validation() {
        let mut s = standard(NoiseModel::default());
        s.stations.pop();
        assert!(sample_observations(&s).is_err());
        let mut s = standard(NoiseModel::default());
        s.noise.rts_sigma_xyz = -1.0;
        assert!(sample_observations(&s).is_err());
        let bad = PathSpec::new(PathKind::Circle { radius: 0.0 }, 1.0, 1.0, 1.0);
        assert!(bad.validate().is_err());
    }
}
