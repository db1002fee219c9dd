use std::fmt::Write as _;

use prismtrack_core::metrics::flatten;
use prismtrack_core::{inter_distance_errors, summarize};

use crate::commands::{metadata, reconstruct::load_meta};
use crate::error::{CliError, Result};
use crate::fsio;
use crate::report::{
    render_boxplot, EvaluationReport, PairSummaries, SystemEvaluation, ERROR_DEFINITION, REPORT_SCHEMA_VERSION,
};
use crate::workspace::{System, Workspace};

pub fn run(ws: &Workspace, id: &str, system: Option<System>, exclude_outliers: bool) -> Result<()> {
    let exp = ws.experiment(id)?;
    let systems = match system {
        Some(s) if !exp.has(s) => return Err(CliError::Config(format!("experiment `{id}` has no [{s}] section"))),
        Some(s) => vec![s],
        None => exp.reconstructed(),
    };
    if systems.is_empty() {
        return Err(CliError::file(&exp.dir.join("derived"), "no reconstructed system; run `prismtrack reconstruct` first"));
    }
    let exclude = exclude_outliers || ws.config.compare.exclude_outliers;
    let anchor = ws.config.match_anchor(None)?;

    let mut evaluations = Vec::with_capacity(systems.len());
    for system in systems {
        let meta = load_meta(&exp, system)?;
        let calib = exp.body_calibration(system)?;
        let derived = exp.triplets(system, exclude)?;
        let records = inter_distance_errors(&derived.triplets, &calib);
        let errors = flatten(&records);
        let summary = summarize(&errors).ok();
        evaluations.push(SystemEvaluation {
            system,
            frame: meta.frame,
            sync_policy: meta.sync_policy,
            admit_float: meta.admit_float,
            reject_threshold: meta.reject_threshold,
            triplets: derived.triplets.len(),
            excluded_outliers: derived.excluded,
            count: errors.len(),
            pairs: PairSummaries::of_flat(&errors),
            summary,
            times: records.iter().map(|r| r.t.0).collect(),
            errors,
        });
    }

    let report = EvaluationReport {
        schema_version: REPORT_SCHEMA_VERSION,
        kind: "inter_distance",
        experiment: id.to_string(),
        metadata: metadata(anchor.to_string(), ws.config.compare.radius, exclude, ERROR_DEFINITION),
        systems: evaluations,
    };
    let dir = exp.reports_dir();
    fsio::write_json(&dir.join("report.json"), &report)?;
    fsio::write(
        &dir.join("boxplot.csv"),
        render_boxplot(report.systems.iter().map(|s| (s.system, &s.summary, &s.pairs))),
    )?;
    for s in &report.systems {
        let mut csv = String::from("t,e01,e02,e12\n");
        for (t, e) in s.times.iter().zip(s.errors.chunks_exact(3)) {
            writeln!(csv, "{t},{},{},{}", e[0], e[1], e[2]).unwrap();
        }
        fsio::write(&dir.join(format!("inter_distance_{}.csv", s.system)), csv)?;
        match &s.summary {
            Some(m) => println!("{id}: {}: median |e| {} m, IQR {} m over {} values", s.system, m.median, m.iqr, m.count),
            None => println!("{id}: {}: no inter-distance values", s.system),
        }
    }
    if report.systems.iter().all(|s| s.count == 0) {
        return Err(CliError::Insufficient(format!("{id}: no triplets left to evaluate")));
    }
    Ok(())
}
