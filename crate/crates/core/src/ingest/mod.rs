//! Parsers for the raw RTS and GNSS logs, and conversion of their records
//! into Cartesian positions.
//!
//! Both log formats are small comma-separated tables preceded by optional
//! `# key=value` metadata lines:
//!
//! ```text
//! # station=station0
//! # target=prism0
//! # angle_unit=deg
//! t,azimuth,elevation,slant_distance
//! 12.500,45.0,10.0,25.000
//! ```
//!
//! ```text
//! # target=gnss1
//! t,lat,lon,height,quality
//! 0.0,46.78,-71.27,95.2,FIX
//! ```
//!
//! A malformed header aborts the parse. A malformed row is skipped and
//! recorded with its line number; if more than 10% of the data rows are
//! skipped the whole file is rejected.

pub mod geodetic;

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::io::Read;

use crate::error::{Error, Result};
use crate::model::{frame, frames, FrameId, Point3, TargetId, TargetKind, TimedPoint, Timestamp};

/// Fraction of rejected rows above which a file is considered the wrong file.
pub const MAX_SKIPPED_FRACTION: f64 = 0.10;

pub const RTS_HEADER: [&str; 4] = ["t", "azimuth", "elevation", "slant_distance"];
pub const GNSS_HEADER: [&str; 5] = ["t", "lat", "lon", "height", "quality"];
pub const ORIGIN_HEADER: [&str; 3] = ["lat", "lon", "height"];

/// One polar measurement of a prism by a total station.
#[derive(Debug, Clone, PartialEq)]
pub struct RtsObservation {
    pub t: Timestamp,
    /// Radians clockwise from the station's +Y ("north") axis, in `[0, 2π)`.
    pub azimuth: f64,
    /// Radians above the horizontal plane.
    pub elevation: f64,
    pub slant_distance: f64,
    pub station: FrameId,
    pub target: Option<TargetId>,
}

impl RtsObservation {
    /// Validates the invariants and normalizes the azimuth.
    pub fn new(
        t: Timestamp,
        azimuth: f64,
        elevation: f64,
        slant_distance: f64,
        station: FrameId,
        target: Option<TargetId>,
    ) -> Result<RtsObservation> {
        if !t.0.is_finite() {
            return Err(Error::NonFinite("timestamp"));
        }
        if !(azimuth.is_finite() && elevation.is_finite() && slant_distance.is_finite()) {
            return Err(Error::NonFinite("polar observation"));
        }
        if slant_distance <= 0.0 {
            return Err(Error::Invalid(format!("slant distance {slant_distance} must be > 0")));
        }
        if elevation.abs() >= FRAC_PI_2 {
            return Err(Error::Invalid(format!("elevation {elevation} rad is not within (-π/2, π/2)")));
        }
        let mut azimuth = azimuth.rem_euclid(TAU);
        if azimuth >= TAU {
            azimuth = 0.0;
        }
        Ok(RtsObservation { t, azimuth, elevation, slant_distance, station, target })
    }
}

/// RTK solution status of a GNSS fix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FixQuality {
    RtkFixed,
    RtkFloat,
    Single,
}

impl FixQuality {
    pub fn from_token(token: &str) -> Option<FixQuality> {
        match token {
            "FIX" => Some(FixQuality::RtkFixed),
            "FLOAT" => Some(FixQuality::RtkFloat),
            "SINGLE" => Some(FixQuality::Single),
            _ => None,
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            FixQuality::RtkFixed => "FIX",
            FixQuality::RtkFloat => "FLOAT",
            FixQuality::Single => "SINGLE",
        }
    }

    /// Whether a fix of this quality enters metric computation.
    pub fn admitted(self, admit_float: bool) -> bool {
        match self {
            FixQuality::RtkFixed => true,
            FixQuality::RtkFloat => admit_float,
            FixQuality::Single => false,
        }
    }
}

/// One RTK-corrected antenna position.
#[derive(Debug, Clone, PartialEq)]
pub struct GnssFix {
    pub t: Timestamp,
    pub latitude: f64,
    pub longitude: f64,
    pub ellipsoidal_height: f64,
    pub quality: FixQuality,
    pub target: Option<TargetId>,
}

fn check_geodetic(latitude: f64, longitude: f64, height: f64) -> Result<f64> {
    if !(latitude.is_finite() && longitude.is_finite() && height.is_finite()) {
        return Err(Error::NonFinite("geodetic coordinate"));
    }
    if latitude.abs() > FRAC_PI_2 {
        return Err(Error::Invalid(format!("latitude {} deg out of range", latitude.to_degrees())));
    }
    if longitude.abs() > PI {
        return Err(Error::Invalid(format!("longitude {} deg out of range", longitude.to_degrees())));
    }
    Ok(if longitude == PI { -PI } else { longitude })
}

impl GnssFix {
    pub fn new(
        t: Timestamp,
        latitude: f64,
        longitude: f64,
        ellipsoidal_height: f64,
        quality: FixQuality,
        target: Option<TargetId>,
    ) -> Result<GnssFix> {
        if !t.0.is_finite() {
            return Err(Error::NonFinite("timestamp"));
        }
        let longitude = check_geodetic(latitude, longitude, ellipsoidal_height)?;
        Ok(GnssFix { t, latitude, longitude, ellipsoidal_height, quality, target })
    }
}

/// Geodetic position of the local ENU origin (the static reference antenna).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodeticOrigin {
    pub latitude: f64,
    pub longitude: f64,
    pub ellipsoidal_height: f64,
}

impl GeodeticOrigin {
    pub fn new(latitude: f64, longitude: f64, ellipsoidal_height: f64) -> Result<GeodeticOrigin> {
        let longitude = check_geodetic(latitude, longitude, ellipsoidal_height)?;
        Ok(GeodeticOrigin { latitude, longitude, ellipsoidal_height })
    }

    pub fn from_degrees(lat_deg: f64, lon_deg: f64, height: f64) -> Result<GeodeticOrigin> {
        GeodeticOrigin::new(lat_deg.to_radians(), lon_deg.to_radians(), height)
    }
}

/// Unit of the angle columns of an RTS log.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AngleUnit {
    #[default]
    Radians,
    Degrees,
}

impl AngleUnit {
    fn to_radians(self, v: f64) -> f64 {
        match self {
            AngleUnit::Radians => v,
            AngleUnit::Degrees => v.to_radians(),
        }
    }
}

/// A data row that failed validation.
#[derive(Debug, Clone, PartialEq)]
pub struct SkippedRow {
    pub line: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RtsLog {
    pub station: FrameId,
    pub target: Option<TargetId>,
    pub observations: Vec<RtsObservation>,
    pub skipped: Vec<SkippedRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GnssLog {
    pub target: Option<TargetId>,
    pub fixes: Vec<GnssFix>,
    pub skipped: Vec<SkippedRow>,
}

struct Table {
    meta: Vec<(usize, String, String)>,
    rows: Vec<(usize, Vec<String>)>,
}

impl Table {
    fn meta(&self, key: &str) -> Option<(usize, &str)> {
        self.meta
            .iter()
            .find(|(_, k, _)| k == key)
            .map(|(line, _, v)| (*line, v.as_str()))
    }
}

fn read_table(mut stream: impl Read, header: &[&str]) -> Result<Table> {
    let mut bytes = Vec::new();
    stream
        .read_to_end(&mut bytes)
        .map_err(|e| Error::Invalid(format!("read failed: {e}")))?;
    let text = String::from_utf8(bytes).map_err(|_| Error::Header {
        line: 0,
        message: "file is not valid UTF-8".into(),
    })?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(&text);

    let mut meta = Vec::new();
    let mut rows = Vec::new();
    let mut seen_header = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim_end_matches('\r').trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((k, v)) = comment.split_once('=') {
                meta.push((line_no, k.trim().to_string(), v.trim().to_string()));
            }
            continue;
        }
        let fields: Vec<String> = line.split(',').map(|f| f.trim().to_string()).collect();
        if !seen_header {
            if fields.len() != header.len() || fields.iter().zip(header).any(|(a, b)| a != b) {
                return Err(Error::Header {
                    line: line_no,
                    message: format!("expected `{}`, found `{}`", header.join(","), line),
                });
            }
            seen_header = true;
            continue;
        }
        rows.push((line_no, fields));
    }
    if !seen_header {
        return Err(Error::Header {
            line: 0,
            message: format!("missing header `{}`", header.join(",")),
        });
    }
    Ok(Table { meta, rows })
}

fn parse_number(field: &str, name: &str) -> std::result::Result<f64, String> {
    let v: f64 = field
        .parse()
        .map_err(|_| format!("{name}: `{field}` is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{name}: `{field}` is not finite"))
    }
}

fn check_skip_ratio(skipped: &[SkippedRow], total: usize) -> Result<()> {
    if total > 0 && skipped.len() as f64 > MAX_SKIPPED_FRACTION * total as f64 {
        let first = &skipped[0];
        return Err(Error::TooManyRejected {
            skipped: skipped.len(),
            total,
            first_line: first.line,
            first_reason: first.reason.clone(),
        });
    }
    Ok(())
}

fn parse_target(table: &Table, kind: TargetKind) -> Result<Option<TargetId>> {
    match table.meta("target") {
        None => Ok(None),
        Some((line, v)) => {
            let id: TargetId = v.parse().map_err(|e: Error| Error::Header {
                line,
                message: e.to_string(),
            })?;
            if id.kind() != kind {
                return Err(Error::Header {
                    line,
                    message: format!("target `{v}` has the wrong kind for this log"),
                });
            }
            Ok(Some(id))
        }
    }
}

/// Tracks the previous accepted timestamp so rows that go back in time are rejected.
struct Monotone(Option<f64>);

impl Monotone {
    fn check(&mut self, t: f64) -> std::result::Result<(), String> {
        if let Some(prev) = self.0 {
            if t <= prev {
                return Err(format!("timestamp {t} does not advance past {prev}"));
            }
        }
        Ok(())
    }

    fn accept(&mut self, t: f64) {
        self.0 = Some(t);
    }
}

/// Parses an RTS log.
///
/// The station frame comes from the `# station=` metadata when present and
/// from `station` otherwise; if both are given they must agree.
pub fn parse_rts_log(stream: impl Read, station: Option<&FrameId>) -> Result<RtsLog> {
    let table = read_table(stream, &RTS_HEADER)?;

    let station = match (table.meta("station"), station) {
        (Some((line, name)), given) => {
            let from_file = FrameId::new(name).map_err(|e| Error::Header {
                line,
                message: e.to_string(),
            })?;
            if let Some(given) = given {
                if given != &from_file {
                    return Err(Error::FrameMismatch {
                        expected: given.to_string(),
                        found: from_file.to_string(),
                    });
                }
            }
            from_file
        }
        (None, Some(given)) => given.clone(),
        (None, None) => {
            return Err(Error::Header {
                line: 0,
                message: "no `# station=` metadata and no station given".into(),
            })
        }
    };
    let target = parse_target(&table, TargetKind::Prism)?;
    let unit = match table.meta("angle_unit") {
        None => AngleUnit::Radians,
        Some((_, "rad")) => AngleUnit::Radians,
        Some((_, "deg")) => AngleUnit::Degrees,
        Some((line, other)) => {
            return Err(Error::Header {
                line,
                message: format!("unknown angle_unit `{other}`"),
            })
        }
    };

    let mut observations = Vec::with_capacity(table.rows.len());
    let mut skipped = Vec::new();
    let mut clock = Monotone(None);
    for (line, fields) in &table.rows {
        let mut row = || -> std::result::Result<RtsObservation, String> {
            if fields.len() != RTS_HEADER.len() {
                return Err(format!("expected {} fields, found {}", RTS_HEADER.len(), fields.len()));
            }
            let t = parse_number(&fields[0], "t")?;
            let az = unit.to_radians(parse_number(&fields[1], "azimuth")?);
            let el = unit.to_radians(parse_number(&fields[2], "elevation")?);
            let d = parse_number(&fields[3], "slant_distance")?;
            clock.check(t)?;
            RtsObservation::new(Timestamp(t), az, el, d, station.clone(), target)
                .map_err(|e| e.to_string())
        };
        match row() {
            Ok(obs) => {
                clock.accept(obs.t.0);
                observations.push(obs);
            }
            Err(reason) => skipped.push(SkippedRow { line: *line, reason }),
        }
    }
    check_skip_ratio(&skipped, table.rows.len())?;
    Ok(RtsLog { station, target, observations, skipped })
}

/// Parses a GNSS fix log. Angles are decimal degrees.
pub fn parse_gnss_log(stream: impl Read) -> Result<GnssLog> {
    let table = read_table(stream, &GNSS_HEADER)?;
    let target = parse_target(&table, TargetKind::GnssAntenna)?;

    let mut fixes = Vec::with_capacity(table.rows.len());
    let mut skipped = Vec::new();
    let mut clock = Monotone(None);
    for (line, fields) in &table.rows {
        let mut row = || -> std::result::Result<GnssFix, String> {
            if fields.len() != GNSS_HEADER.len() {
                return Err(format!("expected {} fields, found {}", GNSS_HEADER.len(), fields.len()));
            }
            let t = parse_number(&fields[0], "t")?;
            let lat = parse_number(&fields[1], "lat")?.to_radians();
            let lon = parse_number(&fields[2], "lon")?.to_radians();
            let h = parse_number(&fields[3], "height")?;
            let quality = FixQuality::from_token(&fields[4])
                .ok_or_else(|| format!("unknown quality token `{}`", fields[4]))?;
            clock.check(t)?;
            GnssFix::new(Timestamp(t), lat, lon, h, quality, target).map_err(|e| e.to_string())
        };
        match row() {
            Ok(fix) => {
                clock.accept(fix.t.0);
                fixes.push(fix);
            }
            Err(reason) => skipped.push(SkippedRow { line: *line, reason }),
        }
    }
    check_skip_ratio(&skipped, table.rows.len())?;
    Ok(GnssLog { target, fixes, skipped })
}

/// Parses an origin file: one `lat,lon,height` row in decimal degrees and
/// meters, optionally preceded by that header line.
pub fn parse_origin(mut stream: impl Read) -> Result<GeodeticOrigin> {
    let mut text = String::new();
    stream
        .read_to_string(&mut text)
        .map_err(|e| Error::Invalid(format!("origin file: {e}")))?;
    let mut rows = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end_matches('\r').trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .filter(|(_, l)| l.split(',').map(str::trim).ne(ORIGIN_HEADER));
    let Some((line, row)) = rows.next() else {
        return Err(Error::Header { line: 0, message: "origin file has no data row".into() });
    };
    if rows.next().is_some() {
        return Err(Error::Header { line, message: "origin file must contain a single row".into() });
    }
    let fields: Vec<&str> = row.split(',').map(str::trim).collect();
    let bad = |message: String| Error::Header { line, message };
    if fields.len() != 3 {
        return Err(bad(format!("expected 3 fields, found {}", fields.len())));
    }
    let lat = parse_number(fields[0], "lat").map_err(bad)?;
    let lon = parse_number(fields[1], "lon").map_err(bad)?;
    let h = parse_number(fields[2], "height").map_err(bad)?;
    GeodeticOrigin::from_degrees(lat, lon, h).map_err(|e| Error::Header { line, message: e.to_string() })
}

/// Polar observation to a Cartesian point in the station frame:
/// `(d·cos e·sin a, d·cos e·cos a, d·sin e)`.
pub fn rts_to_cartesian(obs: &RtsObservation) -> TimedPoint {
    let (sa, ca) = obs.azimuth.sin_cos();
    let (se, ce) = obs.elevation.sin_cos();
    let d = obs.slant_distance;
    TimedPoint {
        t: obs.t,
        p: Point3::new(d * ce * sa, d * ce * ca, d * se),
        frame: obs.station.clone(),
    }
}

/// Inverse of [`rts_to_cartesian`]: `(azimuth, elevation, slant_distance)` of a
/// station-frame point.
pub fn cartesian_to_polar(p: &Point3) -> Result<(f64, f64, f64)> {
    let d = p.norm();
    if !(d > 0.0) {
        return Err(Error::Invalid("point coincides with the station".into()));
    }
    let azimuth = p.x.atan2(p.y).rem_euclid(std::f64::consts::TAU);
    let elevation = p.z.atan2(p.x.hypot(p.y));
    Ok((azimuth, elevation, d))
}

/// Local East-North-Up position of a fix relative to `origin`, in frame `enu@origin`.
pub fn geodetic_to_enu(fix: &GnssFix, origin: &GeodeticOrigin) -> TimedPoint {
    TimedPoint {
        t: fix.t,
        p: geodetic_point_to_enu(fix.latitude, fix.longitude, fix.ellipsoidal_height, origin),
        frame: frame(frames::ENU),
    }
}

pub fn geodetic_point_to_enu(lat: f64, lon: f64, height: f64, origin: &GeodeticOrigin) -> Point3 {
    let ecef = geodetic::geodetic_to_ecef(lat, lon, height);
    let origin_ecef =
        geodetic::geodetic_to_ecef(origin.latitude, origin.longitude, origin.ellipsoidal_height);
    geodetic::ecef_to_enu_rotation(origin.latitude, origin.longitude) * (ecef - origin_ecef)
}

/// Inverse of [`geodetic_point_to_enu`]: `(lat, lon, height)` of an ENU point.
pub fn enu_to_geodetic(enu: &Point3, origin: &GeodeticOrigin) -> (f64, f64, f64) {
    let origin_ecef =
        geodetic::geodetic_to_ecef(origin.latitude, origin.longitude, origin.ellipsoidal_height);
    let rot = geodetic::ecef_to_enu_rotation(origin.latitude, origin.longitude);
    geodetic::ecef_to_geodetic(&(rot.transpose() * enu + origin_ecef))
}
