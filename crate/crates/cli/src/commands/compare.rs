use std::fmt::Write as _;

use prismtrack_core::metrics::anchor_positions;
use prismtrack_core::{inter_distance_errors, inter_experiment_errors, nn_match, summarize, MatchAnchor};

use crate::commands::{metadata, reconstruct::load_meta};
use crate::error::{CliError, Result};
use crate::fsio;
use crate::report::{
    render_boxplot, ComparisonReport, PairSummaries, SideInfo, SystemComparison, DISPARITY_DEFINITION,
    REPORT_SCHEMA_VERSION,
};
use crate::workspace::{Experiment, System, Workspace};

pub struct Options {
    pub radius: Option<f64>,
    pub match_anchor: Option<MatchAnchor>,
    pub system: Option<System>,
    pub exclude_outliers: bool,
}

fn side(exp: &Experiment, system: System, triplets: usize, excluded: usize) -> Result<SideInfo> {
    let meta = load_meta(exp, system)?;
    Ok(SideInfo {
        frame: meta.frame,
        sync_policy: meta.sync_policy,
        admit_float: meta.admit_float,
        reject_threshold: meta.reject_threshold,
        triplets,
        excluded_outliers: excluded,
    })
}

pub fn run(ws: &Workspace, a: &str, b: &str, opts: &Options) -> Result<()> {
    let radius = opts.radius.unwrap_or(ws.config.compare.radius);
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(CliError::Config(format!("radius must be > 0, got {radius}")));
    }
    let anchor = ws.config.match_anchor(opts.match_anchor)?;
    let exclude = opts.exclude_outliers || ws.config.compare.exclude_outliers;
    let ea = ws.experiment(a)?;
    let eb = ws.experiment(b)?;
    let systems: Vec<System> = match opts.system {
        Some(s) => vec![s],
        None => {
            let rb = eb.reconstructed();
            ea.reconstructed().into_iter().filter(|s| rb.contains(s)).collect()
        }
    };
    if systems.is_empty() {
        return Err(CliError::Config(format!("`{a}` and `{b}` have no reconstructed system in common")));
    }

    let mut comparisons = Vec::with_capacity(systems.len());
    let mut pairs_csv = Vec::with_capacity(systems.len());
    for system in systems {
        let da = ea.triplets(system, exclude)?;
        let db = eb.triplets(system, exclude)?;
        let ra = inter_distance_errors(&da.triplets, &ea.body_calibration(system)?);
        let rb = inter_distance_errors(&db.triplets, &eb.body_calibration(system)?);
        let matches = nn_match(
            &anchor_positions(&da.triplets, anchor),
            &anchor_positions(&db.triplets, anchor),
            radius,
        )
        .map_err(|e| CliError::core("matching", e))?;
        let disparities = inter_experiment_errors(&ra, &rb, &matches).map_err(|e| CliError::core("disparities", e))?;

        let side_a = side(&ea, system, da.triplets.len(), da.excluded)?;
        let side_b = side(&eb, system, db.triplets.len(), db.excluded)?;
        if side_a.frame != side_b.frame {
            eprintln!(
                "warning: {system}: frames differ (`{}` vs `{}`); disparities assume a shared frame",
                side_a.frame, side_b.frame
            );
        }

        let mut csv = String::from("index_a,index_b,t_a,t_b,separation,d01,d02,d12\n");
        for (m, d) in matches.iter().zip(disparities.chunks_exact(3)) {
            writeln!(
                csv,
                "{},{},{},{},{},{},{},{}",
                m.index_a, m.index_b, ra[m.index_a].t, rb[m.index_b].t, m.separation, d[0], d[1], d[2]
            )
            .unwrap();
        }
        pairs_csv.push((system, csv));
        comparisons.push(SystemComparison {
            system,
            a: side_a,
            b: side_b,
            matches: matches.len(),
            count: disparities.len(),
            summary: summarize(&disparities).ok(),
            pairs: PairSummaries::of_flat(&disparities),
            disparities,
        });
    }

    let report = ComparisonReport {
        schema_version: REPORT_SCHEMA_VERSION,
        kind: "inter_experiment",
        experiment_a: a.to_string(),
        experiment_b: b.to_string(),
        metadata: metadata(anchor.to_string(), radius, exclude, DISPARITY_DEFINITION),
        systems: comparisons,
    };
    let dir = ws.comparison_dir(a, b);
    fsio::write_json(&dir.join("report.json"), &report)?;
    fsio::write(
        &dir.join("boxplot.csv"),
        render_boxplot(report.systems.iter().map(|s| (s.system, &s.summary, &s.pairs))),
    )?;
    for (system, csv) in pairs_csv {
        fsio::write(&dir.join(format!("disparities_{system}.csv")), csv)?;
    }
    for s in &report.systems {
        match &s.summary {
            Some(m) => println!(
                "{a} vs {b}: {}: {} matches, median |disparity| {} m, IQR {} m",
                s.system, s.matches, m.median, m.iqr
            ),
            None => println!("{a} vs {b}: {}: no matches within {radius} m", s.system),
        }
    }
    Ok(())
}
