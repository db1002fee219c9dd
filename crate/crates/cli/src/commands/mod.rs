pub mod calibrate;
pub mod compare;
pub mod evaluate;
pub mod reconstruct;
pub mod synth;

use prismtrack_core::metrics::QUANTILE_CONVENTION;

use crate::report::{ReportMetadata, TOOL_VERSION};

fn metadata(anchor: String, radius: f64, exclude_outliers: bool, definition: &str) -> ReportMetadata {
    ReportMetadata {
        tool_version: TOOL_VERSION.to_string(),
        quantile_convention: QUANTILE_CONVENTION.to_string(),
        match_anchor: anchor,
        radius,
        exclude_outliers,
        definition: definition.to_string(),
    }
}
