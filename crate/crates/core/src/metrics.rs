//! Precision and reproducibility metrics for ground-truth systems.
//!
//! * Inter-distance: for every synchronous triplet, each measured pairwise
//!   target distance minus its lab-calibrated value.
//! * Inter-experiment: triplets of two experiments are matched spatially by
//!   nearest neighbor within a radius, and their inter-distance errors are
//!   subtracted.
//!
//! Summaries report the median and interquartile range of absolute errors,
//! with quantiles by linear interpolation between order statistics
//! (Hyndman-Fan type 7).

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Point3, Timestamp};
use crate::pose::{BodyCalibration, PAIRS};
use crate::sync::SyncTriplet;

/// Default nearest-neighbor match radius (m).
pub const DEFAULT_MATCH_RADIUS: f64 = 2.0;

/// Name of the quantile convention, embedded in reports.
pub const QUANTILE_CONVENTION: &str = "linear interpolation between order statistics (type 7)";

/// Signed inter-distance errors of one triplet, in meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterDistanceRecord {
    pub t: Timestamp,
    /// `[e01, e02, e12]`: measured minus calibrated distance.
    pub errors: [f64; 3],
}

/// Measured pairwise distances minus the calibrated distances, per triplet.
///
/// `calib` must describe the same system (prisms or antennas) the triplets come from.
pub fn inter_distance_errors(triplets: &[SyncTriplet], calib: &BodyCalibration) -> Vec<InterDistanceRecord> {
    let reference = calib.pairwise_distances();
    triplets
        .iter()
        .map(|tr| {
            let mut errors = [0.0; 3];
            for (k, (i, j)) in PAIRS.iter().enumerate() {
                errors[k] = (tr.points[*i] - tr.points[*j]).norm() - reference[k];
            }
            InterDistanceRecord { t: tr.t, errors }
        })
        .collect()
}

/// Which point of a triplet locates it for spatial matching.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchAnchor {
    #[default]
    Target0,
    Centroid,
}

impl fmt::Display for MatchAnchor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchAnchor::Target0 => "target0",
            MatchAnchor::Centroid => "centroid",
        })
    }
}

impl std::str::FromStr for MatchAnchor {
    type Err = Error;

    fn from_str(s: &str) -> Result<MatchAnchor> {
        match s {
            "target0" => Ok(MatchAnchor::Target0),
            "centroid" => Ok(MatchAnchor::Centroid),
            _ => Err(Error::Invalid(format!("unknown match anchor `{s}`; expected target0 or centroid"))),
        }
    }
}

pub fn anchor_positions(triplets: &[SyncTriplet], anchor: MatchAnchor) -> Vec<Point3> {
    triplets
        .iter()
        .map(|tr| match anchor {
            MatchAnchor::Target0 => tr.points[0],
            MatchAnchor::Centroid => tr.centroid(),
        })
        .collect()
}

/// A point of experiment A and its nearest neighbor in experiment B.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchPair {
    pub index_a: usize,
    pub index_b: usize,
    pub separation: f64,
}

fn dist2(a: &Point3, b: &Point3) -> f64 {
    let (dx, dy, dz) = (a.x - b.x, a.y - b.y, a.z - b.z);
    dx * dx + dy * dy + dz * dz
}

type Cell = (i64, i64, i64);

fn cell_of(p: &Point3, size: f64) -> Cell {
    ((p.x / size).floor() as i64, (p.y / size).floor() as i64, (p.z / size).floor() as i64)
}

/// For every point of `a`, its nearest neighbor in `b` if it lies within `radius`.
///
/// Uses a uniform hash grid with cells slightly larger than `radius`, so only
/// the 27 cells around a query need to be visited. Ties in distance go to the
/// lowest `index_b`. The output is sorted by `index_a` and equals an
/// exhaustive search.
pub fn nn_match(a: &[Point3], b: &[Point3], radius: f64) -> Result<Vec<MatchPair>> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::Invalid(format!("match radius must be > 0, got {radius}")));
    }
    if a.is_empty() || b.is_empty() {
        return Ok(Vec::new());
    }
    let size = radius * (1.0 + 1e-9);
    let mut grid: HashMap<Cell, Vec<usize>> = HashMap::new();
    for (j, p) in b.iter().enumerate() {
        grid.entry(cell_of(p, size)).or_default().push(j);
    }

    let mut out = Vec::new();
    for (i, p) in a.iter().enumerate() {
        let (cx, cy, cz) = cell_of(p, size);
        let mut best: Option<(f64, usize)> = None;
        for dx in -1..=1 {
            for dy in -1..=1 {
                for dz in -1..=1 {
                    let key = (cx.saturating_add(dx), cy.saturating_add(dy), cz.saturating_add(dz));
                    let Some(cands) = grid.get(&key) else { continue };
                    for &j in cands {
                        let d2 = dist2(p, &b[j]);
                        let better = match best {
                            None => true,
                            Some((bd, bj)) => d2 < bd || (d2 == bd && j < bj),
                        };
                        if better {
                            best = Some((d2, j));
                        }
                    }
                }
            }
        }
        if let Some((d2, j)) = best {
            let separation = d2.sqrt();
            if separation <= radius {
                out.push(MatchPair { index_a: i, index_b: j, separation });
            }
        }
    }
    Ok(out)
}

/// Per-match differences `e(A) − e(B)`, flattened in `(e01, e02, e12)` order.
pub fn inter_experiment_errors(
    records_a: &[InterDistanceRecord],
    records_b: &[InterDistanceRecord],
    matches: &[MatchPair],
) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(3 * matches.len());
    for m in matches {
        let ra = records_a
            .get(m.index_a)
            .ok_or(Error::IndexOutOfRange { index: m.index_a, len: records_a.len() })?;
        let rb = records_b
            .get(m.index_b)
            .ok_or(Error::IndexOutOfRange { index: m.index_b, len: records_b.len() })?;
        out.extend((0..3).map(|k| ra.errors[k] - rb.errors[k]));
    }
    Ok(out)
}

/// Box-plot statistics of absolute errors (m).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MetricSummary {
    pub count: usize,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub iqr: f64,
}

/// Type-7 quantile of an ascending slice.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Summarizes the absolute values of `errors`.
pub fn summarize(errors: &[f64]) -> Result<MetricSummary> {
    if errors.is_empty() {
        return Err(Error::EmptySummary);
    }
    if errors.iter().any(|e| !e.is_finite()) {
        return Err(Error::NonFinite("error series"));
    }
    let mut abs: Vec<f64> = errors.iter().map(|e| e.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let q1 = quantile_sorted(&abs, 0.25);
    let q3 = quantile_sorted(&abs, 0.75);
    Ok(MetricSummary {
        count: abs.len(),
        min: abs[0],
        q1,
        median: quantile_sorted(&abs, 0.5),
        q3,
        max: abs[abs.len() - 1],
        iqr: q3 - q1,
    })
}

/// Flattens records into one `(e01, e02, e12, e01, …)` series.
pub fn flatten(records: &[InterDistanceRecord]) -> Vec<f64> {
    records.iter().flat_map(|r| r.errors).collect()
}
