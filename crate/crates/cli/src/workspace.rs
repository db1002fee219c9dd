//! On-disk layout of a workspace and loading of one experiment's inputs.
//!
//! ```text
//! <ws>/workspace.toml
//! <ws>/<id>/experiment.toml
//! <ws>/<id>/raw/        instrument logs
//! <ws>/<id>/calib/      body calibrations
//! <ws>/<id>/derived/    stations.json, <system>/{poses,triplets,pose_quality}.csv, <system>/meta.json
//! <ws>/<id>/reports/    report.json and plot CSVs
//! <ws>/comparisons/<a>__<b>/
//! ```

use std::fmt;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use prismtrack_core::files::{parse_body_calibration, parse_pose_quality, parse_triplets};
use prismtrack_core::ingest::{parse_gnss_log, parse_origin, parse_rts_log, GnssLog, RtsLog};
use prismtrack_core::{BodyCalibration, GeodeticOrigin, SyncTriplet, TargetKind};
use serde::{Deserialize, Serialize};

use crate::config::{check_id, resolve, ExperimentManifest, WorkspaceConfig};
use crate::error::{CliError, Result};
use crate::fsio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    Rts,
    Gnss,
}

impl System {
    pub const ALL: [System; 2] = [System::Rts, System::Gnss];

    pub fn name(self) -> &'static str {
        match self {
            System::Rts => "rts",
            System::Gnss => "gnss",
        }
    }

    pub fn target_kind(self) -> TargetKind {
        match self {
            System::Rts => TargetKind::Prism,
            System::Gnss => TargetKind::GnssAntenna,
        }
    }
}

impl fmt::Display for System {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub struct Workspace {
    pub root: PathBuf,
    pub config: WorkspaceConfig,
}

impl Workspace {
    pub fn open(root: &Path) -> Result<Workspace> {
        if !root.is_dir() {
            return Err(CliError::file(root, "workspace directory not found"));
        }
        Ok(Workspace { root: root.to_path_buf(), config: WorkspaceConfig::load(root)? })
    }

    pub fn experiment(&self, id: &str) -> Result<Experiment> {
        check_id(id)?;
        let dir = self.root.join(id);
        let manifest = ExperimentManifest::load(&dir, id)?;
        Ok(Experiment { dir, manifest })
    }

    pub fn comparison_dir(&self, a: &str, b: &str) -> PathBuf {
        self.root.join("comparisons").join(format!("{a}__{b}"))
    }
}

pub struct Experiment {
    pub dir: PathBuf,
    pub manifest: ExperimentManifest,
}

impl Experiment {
    pub fn id(&self) -> &str {
        &self.manifest.id
    }

    pub fn stations_path(&self) -> PathBuf {
        self.dir.join("derived").join("stations.json")
    }

    pub fn derived_dir(&self, system: System) -> PathBuf {
        self.dir.join("derived").join(system.name())
    }

    pub fn reports_dir(&self) -> PathBuf {
        self.dir.join("reports")
    }

    pub fn has(&self, system: System) -> bool {
        match system {
            System::Rts => self.manifest.rts.is_some(),
            System::Gnss => self.manifest.gnss.is_some(),
        }
    }

    /// Systems configured in the manifest and already reconstructed.
    pub fn reconstructed(&self) -> Vec<System> {
        System::ALL
            .into_iter()
            .filter(|s| self.has(*s) && self.derived_dir(*s).join("triplets.csv").exists())
            .collect()
    }

    fn existing(&self, rel: &str) -> Result<PathBuf> {
        let path = resolve(&self.dir, rel);
        if path.is_file() {
            Ok(path)
        } else {
            Err(CliError::file(&path, "file not found"))
        }
    }

    fn missing(&self, system: System) -> CliError {
        CliError::file(&self.dir.join(crate::config::EXPERIMENT_FILE), format!("no [{system}] section"))
    }

    pub fn body_calibration(&self, system: System) -> Result<BodyCalibration> {
        let rel = match system {
            System::Rts => self.manifest.rts.as_ref().map(|r| r.body.as_str()),
            System::Gnss => self.manifest.gnss.as_ref().map(|g| g.body.as_str()),
        }
        .ok_or_else(|| self.missing(system))?;
        let path = self.existing(rel)?;
        parse_body_calibration(fsio::open(&path)?, system.target_kind()).map_err(|e| CliError::data(&path, e))
    }

    pub fn gcp_logs(&self) -> Result<Vec<RtsLog>> {
        let rts = self.manifest.rts.as_ref().ok_or_else(|| self.missing(System::Rts))?;
        if rts.gcp.is_empty() {
            return Err(self.missing(System::Rts));
        }
        rts.gcp.iter().map(|rel| self.rts_log(rel)).collect()
    }

    pub fn rts_logs(&self) -> Result<Vec<RtsLog>> {
        let rts = self.manifest.rts.as_ref().ok_or_else(|| self.missing(System::Rts))?;
        rts.logs.iter().map(|rel| self.rts_log(rel)).collect()
    }

    fn rts_log(&self, rel: &str) -> Result<RtsLog> {
        let path = self.existing(rel)?;
        let log = parse_rts_log(fsio::open(&path)?, None).map_err(|e| CliError::data(&path, e))?;
        report_skipped(&path, log.skipped.len());
        Ok(log)
    }

    pub fn gnss_logs(&self) -> Result<Vec<GnssLog>> {
        let gnss = self.manifest.gnss.as_ref().ok_or_else(|| self.missing(System::Gnss))?;
        gnss.logs
            .iter()
            .map(|rel| {
                let path = self.existing(rel)?;
                let log = parse_gnss_log(fsio::open(&path)?).map_err(|e| CliError::data(&path, e))?;
                report_skipped(&path, log.skipped.len());
                Ok(log)
            })
            .collect()
    }

    pub fn origin(&self) -> Result<GeodeticOrigin> {
        let gnss = self.manifest.gnss.as_ref().ok_or_else(|| self.missing(System::Gnss))?;
        let path = self.existing(&gnss.origin)?;
        parse_origin(fsio::open(&path)?).map_err(|e| CliError::data(&path, e))
    }

    /// Reconstructed triplets, without those whose pose was flagged when `exclude_outliers`.
    pub fn triplets(&self, system: System, exclude_outliers: bool) -> Result<DerivedTriplets> {
        let dir = self.derived_dir(system);
        let path = dir.join("triplets.csv");
        if !path.is_file() {
            return Err(CliError::file(&path, format!("not found; run `prismtrack reconstruct --system {system}` first")));
        }
        let all = parse_triplets(fsio::open(&path)?).map_err(|e| CliError::data(&path, e))?;
        if !exclude_outliers {
            return Ok(DerivedTriplets { triplets: all, excluded: 0 });
        }
        let qpath = dir.join("pose_quality.csv");
        let quality = parse_pose_quality(fsio::open(&qpath)?).map_err(|e| CliError::data(&qpath, e))?;
        let flagged: Vec<f64> = quality.iter().filter(|q| q.2).map(|q| q.0 .0).collect();
        let total = all.len();
        let triplets: Vec<SyncTriplet> =
            all.into_iter().filter(|tr| flagged.binary_search_by(|t| t.total_cmp(&tr.t.0)).is_err()).collect();
        Ok(DerivedTriplets { excluded: total - triplets.len(), triplets })
    }
}

pub struct DerivedTriplets {
    pub triplets: Vec<SyncTriplet>,
    pub excluded: usize,
}

fn report_skipped(path: &Path, n: usize) {
    if n > 0 {
        eprintln!("warning: {}: skipped {n} malformed row(s)", path.display());
    }
}
