use prismtrack_core::files::{render_pose_quality, render_poses, render_triplets};
use prismtrack_core::pipeline::{gnss_trajectories, rts_trajectories, run_system};
use prismtrack_core::{Error as CoreError, Pose, Reference, SyncTriplet, Timestamp};

use crate::commands::calibrate;
use crate::error::{CliError, Result};
use crate::fsio;
use crate::report::{ReconstructionCounts, ReconstructionMeta, SyncSettings, REPORT_SCHEMA_VERSION, TOOL_VERSION};
use crate::workspace::{System, Workspace};

pub struct Options {
    pub system: System,
    pub max_gap: Option<f64>,
    pub reference: Option<Reference>,
    pub admit_float: bool,
}

pub fn run(ws: &Workspace, id: &str, opts: &Options) -> Result<()> {
    let system = opts.system;
    let exp = ws.experiment(id)?;
    if !exp.has(system) {
        return Err(CliError::Config(format!("experiment `{id}` has no [{system}] section")));
    }
    let policy = ws.config.sync_policy(opts.max_gap, opts.reference)?;
    let admit_float = opts.admit_float || ws.config.gnss.admit_float;
    let reject_threshold = ws.config.pose.reject_threshold;
    if !(reject_threshold > 0.0 && reject_threshold.is_finite()) {
        return Err(CliError::Config(format!("pose.reject_threshold must be > 0, got {reject_threshold}")));
    }
    let calib = exp.body_calibration(system)?;

    let (streams, rejected_fixes, skipped_rows) = match system {
        System::Rts => {
            let stations = calibrate::load(&exp)?;
            let logs = exp.rts_logs()?;
            let skipped = logs.iter().map(|l| l.skipped.len()).sum();
            let streams = rts_trajectories(&logs, &stations).map_err(|e| CliError::core(format!("{id}: RTS streams"), e))?;
            (streams, 0, skipped)
        }
        System::Gnss => {
            let logs = exp.gnss_logs()?;
            let origin = exp.origin()?;
            let skipped = logs.iter().map(|l| l.skipped.len()).sum();
            let (streams, rejected) = gnss_trajectories(&logs, &origin, admit_float)
                .map_err(|e| CliError::core(format!("{id}: GNSS streams"), e))?;
            (streams, rejected, skipped)
        }
    };
    let frame = streams[0].frame().to_string();
    let run = run_system(streams, &calib, &policy, reject_threshold)
        .map_err(|e| CliError::core(format!("{id}: {system} synchronization"), e))?;
    if run.sync.triplets.is_empty() {
        return Err(CliError::Insufficient(format!(
            "{id}: no synchronous {system} triplets ({} reference timestamps could not be interpolated within max_gap {} s)",
            run.sync.omitted, policy.max_gap
        )));
    }
    let recon = run.reconstruction;
    if recon.poses.is_empty() {
        let source = recon.failures.into_iter().next().map(|f| f.1).unwrap_or(CoreError::EmptySummary);
        return Err(CliError::core(format!("{id}: every {system} triplet failed"), source));
    }

    let epoch = run.epoch;
    let shift = |t: Timestamp| Timestamp(t.0 + epoch);
    let triplets: Vec<SyncTriplet> =
        run.sync.triplets.iter().map(|tr| SyncTriplet { t: shift(tr.t), points: tr.points }).collect();
    let poses: Vec<Pose> = recon.poses.iter().map(|p| Pose { t: shift(p.t), ..p.clone() }).collect();
    let degenerate_times: Vec<f64> = recon.failures.iter().map(|(i, _)| triplets[*i].t.0).collect();
    for t in &degenerate_times {
        eprintln!("warning: {id}: degenerate {system} triplet at t = {t} skipped");
    }

    let outliers = poses.iter().filter(|p| p.outlier).count();
    let meta = ReconstructionMeta {
        schema_version: REPORT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        experiment: id.to_string(),
        system,
        frame,
        epoch,
        sync_policy: SyncSettings::from(&policy),
        admit_float,
        reject_threshold,
        counts: ReconstructionCounts {
            triplets: triplets.len(),
            omitted: run.sync.omitted,
            speed_gated: run.sync.speed_gated,
            poses: poses.len(),
            outliers,
            degenerate: degenerate_times.len(),
            rejected_fixes,
            skipped_rows,
        },
        degenerate_times,
    };

    let dir = exp.derived_dir(system);
    fsio::write(&dir.join("triplets.csv"), render_triplets(&triplets))?;
    fsio::write(&dir.join("poses.csv"), render_poses(poses.iter().map(|p| (p.t, &p.transform))))?;
    fsio::write(&dir.join("pose_quality.csv"), render_pose_quality(&poses))?;
    fsio::write_json(&dir.join("meta.json"), &meta)?;
    println!(
        "{id}: {system}: {} triplets, {} poses ({outliers} flagged), {} omitted",
        meta.counts.triplets, meta.counts.poses, meta.counts.omitted
    );
    Ok(())
}

pub fn load_meta(exp: &crate::workspace::Experiment, system: System) -> Result<ReconstructionMeta> {
    let path = exp.derived_dir(system).join("meta.json");
    if !path.is_file() {
        return Err(CliError::file(&path, format!("not found; run `prismtrack reconstruct --system {system}` first")));
    }
    fsio::read_json(&path)
}
