//! Text formats written and read by the pipeline besides the raw logs.
//!
//! Floats are written with Rust's shortest round-trip formatting, so every
//! value reads back bit-identical and output is byte-stable.

use std::fmt::Write as _;
use std::io::Read;

use crate::error::{Error, Result};
use crate::ingest::{GeodeticOrigin, GnssLog, RtsLog, GNSS_HEADER, ORIGIN_HEADER, RTS_HEADER};
use crate::model::{FrameId, Point3, Pose, RigidTransform, TargetId, TargetKind, Timestamp};
use crate::pose::BodyCalibration;
use crate::sync::SyncTriplet;

pub const BODY_HEADER: &str = "target,x,y,z";
pub const POSES_HEADER: &str = "t,x,y,z,qw,qx,qy,qz";
pub const POSE_QUALITY_HEADER: &str = "t,residual_rmse,outlier";
pub const TRIPLETS_HEADER: &str = "t,p0x,p0y,p0z,p1x,p1y,p1z,p2x,p2y,p2z";

/// RTS log in the ingest schema, angles in radians.
pub fn render_rts_log(log: &RtsLog) -> String {
    let mut s = String::new();
    writeln!(s, "# station={}", log.station).unwrap();
    if let Some(t) = log.target {
        writeln!(s, "# target={t}").unwrap();
    }
    s.push_str("# angle_unit=rad\n");
    s.push_str(&RTS_HEADER.join(","));
    s.push('\n');
    for o in &log.observations {
        writeln!(s, "{},{},{},{}", o.t, o.azimuth, o.elevation, o.slant_distance).unwrap();
    }
    s
}

/// GNSS log in the ingest schema, angles in decimal degrees.
pub fn render_gnss_log(log: &GnssLog) -> String {
    let mut s = String::new();
    if let Some(t) = log.target {
        writeln!(s, "# target={t}").unwrap();
    }
    s.push_str(&GNSS_HEADER.join(","));
    s.push('\n');
    for f in &log.fixes {
        writeln!(
            s,
            "{},{},{},{},{}",
            f.t,
            f.latitude.to_degrees(),
            f.longitude.to_degrees(),
            f.ellipsoidal_height,
            f.quality.token()
        )
        .unwrap();
    }
    s
}

pub fn render_origin(origin: &GeodeticOrigin) -> String {
    format!(
        "{}\n{},{},{}\n",
        ORIGIN_HEADER.join(","),
        origin.latitude.to_degrees(),
        origin.longitude.to_degrees(),
        origin.ellipsoidal_height
    )
}

pub fn render_body_calibration(calib: &BodyCalibration) -> String {
    let mut s = format!("{BODY_HEADER}\n");
    for (i, p) in calib.points().iter().enumerate() {
        let id = TargetId::new(calib.kind(), i).expect("index < 3");
        writeln!(s, "{id},{},{},{}", p.x, p.y, p.z).unwrap();
    }
    s
}

struct Rows {
    rows: Vec<(usize, Vec<String>)>,
}

fn read_rows(mut stream: impl Read, header: &str, what: &str) -> Result<Rows> {
    let mut text = String::new();
    stream
        .read_to_string(&mut text)
        .map_err(|e| Error::Invalid(format!("{what}: {e}")))?;
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    match lines.next() {
        Some((_, h)) if h == header => {}
        Some((line, h)) => {
            return Err(Error::Header { line, message: format!("{what}: expected `{header}`, found `{h}`") })
        }
        None => return Err(Error::Header { line: 0, message: format!("{what}: missing header `{header}`") }),
    }
    let width = header.split(',').count();
    let mut rows = Vec::new();
    for (line, l) in lines {
        let fields: Vec<String> = l.split(',').map(|f| f.trim().to_string()).collect();
        if fields.len() != width {
            return Err(Error::Header {
                line,
                message: format!("{what}: expected {width} fields, found {}", fields.len()),
            });
        }
        rows.push((line, fields));
    }
    Ok(Rows { rows })
}

fn number(field: &str, line: usize, what: &str) -> Result<f64> {
    match field.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::Header { line, message: format!("{what}: `{field}` is not a finite number") }),
    }
}

/// Reads a `target,x,y,z` body calibration with exactly one row per target index.
pub fn parse_body_calibration(stream: impl Read, kind: TargetKind) -> Result<BodyCalibration> {
    let what = "body calibration";
    let table = read_rows(stream, BODY_HEADER, what)?;
    let mut points: [Option<Point3>; 3] = [None; 3];
    for (line, f) in &table.rows {
        let id: TargetId = f[0]
            .parse()
            .map_err(|e: Error| Error::Header { line: *line, message: format!("{what}: {e}") })?;
        if id.kind() != kind {
            return Err(Error::Header { line: *line, message: format!("{what}: unexpected target `{id}`") });
        }
        if points[id.index()].is_some() {
            return Err(Error::Header { line: *line, message: format!("{what}: duplicate target `{id}`") });
        }
        points[id.index()] =
            Some(Point3::new(number(&f[1], *line, what)?, number(&f[2], *line, what)?, number(&f[3], *line, what)?));
    }
    match points {
        [Some(a), Some(b), Some(c)] => BodyCalibration::new(kind, [a, b, c]),
        _ => Err(Error::Invalid(format!("{what}: all three targets must be listed"))),
    }
}

pub fn render_poses<'a>(poses: impl IntoIterator<Item = (Timestamp, &'a RigidTransform)>) -> String {
    let mut s = format!("{POSES_HEADER}\n");
    for (t, tf) in poses {
        let p = tf.translation();
        let q = tf.quaternion();
        writeln!(s, "{t},{},{},{},{},{},{},{}", p.x, p.y, p.z, q[0], q[1], q[2], q[3]).unwrap();
    }
    s
}

/// Reads `t,x,y,z,qw,qx,qy,qz` rows as body-to-`world` transforms.
pub fn parse_poses(stream: impl Read, world: &FrameId) -> Result<Vec<(Timestamp, RigidTransform)>> {
    let what = "pose file";
    let table = read_rows(stream, POSES_HEADER, what)?;
    let body = crate::model::frame(crate::model::frames::BODY);
    table
        .rows
        .iter()
        .map(|(line, f)| {
            let v: Vec<f64> = f.iter().map(|x| number(x, *line, what)).collect::<Result<_>>()?;
            let tf = RigidTransform::from_quaternion(
                [v[4], v[5], v[6], v[7]],
                Point3::new(v[1], v[2], v[3]),
                body.clone(),
                world.clone(),
            )?;
            Ok((Timestamp(v[0]), tf))
        })
        .collect()
}

pub fn render_pose_quality(poses: &[Pose]) -> String {
    let mut s = format!("{POSE_QUALITY_HEADER}\n");
    for p in poses {
        writeln!(s, "{},{},{}", p.t, p.residual_rmse, u8::from(p.outlier)).unwrap();
    }
    s
}

/// Reads `t,residual_rmse,outlier` rows.
pub fn parse_pose_quality(stream: impl Read) -> Result<Vec<(Timestamp, f64, bool)>> {
    let what = "pose quality file";
    let table = read_rows(stream, POSE_QUALITY_HEADER, what)?;
    table
        .rows
        .iter()
        .map(|(line, f)| {
            let outlier = match f[2].as_str() {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::Header { line: *line, message: format!("{what}: bad outlier flag `{other}`") })
                }
            };
            Ok((Timestamp(number(&f[0], *line, what)?), number(&f[1], *line, what)?, outlier))
        })
        .collect()
}

pub fn render_triplets(triplets: &[SyncTriplet]) -> String {
    let mut s = format!("{TRIPLETS_HEADER}\n");
    for tr in triplets {
        write!(s, "{}", tr.t).unwrap();
        for p in &tr.points {
            write!(s, ",{},{},{}", p.x, p.y, p.z).unwrap();
        }
        s.push('\n');
    }
    s
}

pub fn parse_triplets(stream: impl Read) -> Result<Vec<SyncTriplet>> {
    let what = "triplet file";
    let table = read_rows(stream, TRIPLETS_HEADER, what)?;
    table
        .rows
        .iter()
        .map(|(line, f)| {
            let v: Vec<f64> = f.iter().map(|x| number(x, *line, what)).collect::<Result<_>>()?;
            Ok(SyncTriplet {
                t: Timestamp(v[0]),
                points: [
                    Point3::new(v[1], v[2], v[3]),
                    Point3::new(v[4], v[5], v[6]),
                    Point3::new(v[7], v[8], v[9]),
                ],
            })
        })
        .collect()
}
