//! Serialized artifacts. Field order is the JSON key order.

use std::fmt::Write as _;

use prismtrack_core::{summarize, MetricSummary, SyncPolicy};
use serde::{Deserialize, Serialize};

use crate::workspace::System;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const ERROR_DEFINITION: &str =
    "e_ij = |p_i - p_j| - d_ij in meters, pairs ordered (01, 02, 12); raw arrays are signed, summaries use |e|";
pub const DISPARITY_DEFINITION: &str =
    "e_ij(A) - e_ij(B) for each nearest-neighbor match, pairs ordered (01, 02, 12); raw arrays are signed, summaries use |e|";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyncSettings {
    pub max_gap: f64,
    pub reference: String,
    pub max_speed: Option<f64>,
}

impl From<&SyncPolicy> for SyncSettings {
    fn from(p: &SyncPolicy) -> Self {
        SyncSettings { max_gap: p.max_gap, reference: p.reference.to_string(), max_speed: p.max_speed }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationRecord {
    pub station: String,
    /// Row-major rotation into the reference station frame.
    pub rotation: [[f64; 3]; 3],
    pub translation: [f64; 3],
    /// `[w, x, y, z]`, `w >= 0`
    pub quaternion: [f64; 4],
    pub rmse: f64,
    pub gcp_count: usize,
    pub residuals: Vec<f64>,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationsFile {
    pub schema_version: u32,
    pub tool_version: String,
    pub experiment: String,
    pub reference_station: String,
    pub stations: Vec<StationRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionCounts {
    pub triplets: usize,
    pub omitted: usize,
    pub speed_gated: [usize; 3],
    pub poses: usize,
    pub outliers: usize,
    pub degenerate: usize,
    pub rejected_fixes: usize,
    pub skipped_rows: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionMeta {
    pub schema_version: u32,
    pub tool_version: String,
    pub experiment: String,
    pub system: System,
    pub frame: String,
    /// Subtracted from all timestamps during synchronization; outputs carry absolute times.
    pub epoch: f64,
    pub sync_policy: SyncSettings,
    pub admit_float: bool,
    pub reject_threshold: f64,
    pub counts: ReconstructionCounts,
    /// Reference timestamps whose triplet was degenerate.
    pub degenerate_times: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairSummaries {
    pub d01: Option<MetricSummary>,
    pub d02: Option<MetricSummary>,
    pub d12: Option<MetricSummary>,
}

impl PairSummaries {
    /// Summaries of a flattened `(e01, e02, e12, …)` series.
    pub fn of_flat(values: &[f64]) -> PairSummaries {
        let pick = |k: usize| -> Option<MetricSummary> {
            let v: Vec<f64> = values.iter().skip(k).step_by(3).copied().collect();
            summarize(&v).ok()
        };
        PairSummaries { d01: pick(0), d02: pick(1), d12: pick(2) }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub tool_version: String,
    pub quantile_convention: String,
    pub match_anchor: String,
    pub radius: f64,
    pub exclude_outliers: bool,
    pub definition: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemEvaluation {
    pub system: System,
    pub frame: String,
    pub sync_policy: SyncSettings,
    pub admit_float: bool,
    pub reject_threshold: f64,
    pub triplets: usize,
    pub excluded_outliers: usize,
    pub count: usize,
    pub summary: Option<MetricSummary>,
    pub pairs: PairSummaries,
    pub times: Vec<f64>,
    pub errors: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub schema_version: u32,
    pub kind: &'static str,
    pub experiment: String,
    pub metadata: ReportMetadata,
    pub systems: Vec<SystemEvaluation>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SideInfo {
    pub frame: String,
    pub sync_policy: SyncSettings,
    pub admit_float: bool,
    pub reject_threshold: f64,
    pub triplets: usize,
    pub excluded_outliers: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SystemComparison {
    pub system: System,
    pub a: SideInfo,
    pub b: SideInfo,
    pub matches: usize,
    pub count: usize,
    pub summary: Option<MetricSummary>,
    pub pairs: PairSummaries,
    pub disparities: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub schema_version: u32,
    pub kind: &'static str,
    pub experiment_a: String,
    pub experiment_b: String,
    pub metadata: ReportMetadata,
    pub systems: Vec<SystemComparison>,
}

pub const BOXPLOT_HEADER: &str = "system,series,count,min,q1,median,q3,max,iqr";

/// One row per system and series (`all`, `d01`, `d02`, `d12`); empty series leave the statistics blank.
pub fn render_boxplot<'a>(rows: impl IntoIterator<Item = (System, &'a Option<MetricSummary>, &'a PairSummaries)>) -> String {
    let mut s = String::from(BOXPLOT_HEADER);
    s.push('\n');
    for (system, all, pairs) in rows {
        for (series, m) in [("all", all), ("d01", &pairs.d01), ("d02", &pairs.d02), ("d12", &pairs.d12)] {
            match m {
                Some(m) => writeln!(
                    s,
                    "{system},{series},{},{},{},{},{},{},{}",
                    m.count, m.min, m.q1, m.median, m.q3, m.max, m.iqr
                )
                .unwrap(),
                None => writeln!(s, "{system},{series},0,,,,,,").unwrap(),
            }
        }
    }
    s
}
