//! `workspace.toml` and per-experiment `experiment.toml`.

use std::path::{Path, PathBuf};

use prismtrack_core::pose::DEFAULT_REJECT_THRESHOLD;
use prismtrack_core::{MatchAnchor, Reference, SyncPolicy};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};
use crate::fsio;

pub const SCHEMA_VERSION: u32 = 1;
pub const WORKSPACE_FILE: &str = "workspace.toml";
pub const EXPERIMENT_FILE: &str = "experiment.toml";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorkspaceConfig {
    pub schema_version: u32,
    #[serde(default)]
    pub sync: SyncSection,
    #[serde(default)]
    pub pose: PoseSection,
    #[serde(default)]
    pub gnss: GnssSection,
    #[serde(default)]
    pub compare: CompareSection,
}

impl Default for WorkspaceConfig {
    fn default() -> Self {
        WorkspaceConfig {
            schema_version: SCHEMA_VERSION,
            sync: SyncSection::default(),
            pose: PoseSection::default(),
            gnss: GnssSection::default(),
            compare: CompareSection::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyncSection {
    /// s
    pub max_gap: f64,
    /// `stream0` or `grid:<step>`
    pub reference: String,
    /// m/s; the gate is off when `speed_gate` is false.
    pub max_speed: f64,
    pub speed_gate: bool,
}

impl Default for SyncSection {
    fn default() -> Self {
        let d = SyncPolicy::default();
        SyncSection {
            max_gap: d.max_gap,
            reference: d.reference.to_string(),
            max_speed: d.max_speed.unwrap_or(5.0),
            speed_gate: d.max_speed.is_some(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PoseSection {
    /// m
    pub reject_threshold: f64,
}

impl Default for PoseSection {
    fn default() -> Self {
        PoseSection { reject_threshold: DEFAULT_REJECT_THRESHOLD }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GnssSection {
    pub admit_float: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareSection {
    /// m
    pub radius: f64,
    /// `target0` or `centroid`
    pub match_anchor: String,
    pub exclude_outliers: bool,
}

impl Default for CompareSection {
    fn default() -> Self {
        CompareSection {
            radius: prismtrack_core::metrics::DEFAULT_MATCH_RADIUS,
            match_anchor: MatchAnchor::default().to_string(),
            exclude_outliers: false,
        }
    }
}

impl WorkspaceConfig {
    /// Reads `workspace.toml`; a missing file means all defaults.
    pub fn load(root: &Path) -> Result<WorkspaceConfig> {
        let path = root.join(WORKSPACE_FILE);
        if !path.exists() {
            return Ok(WorkspaceConfig::default());
        }
        let text = fsio::read_string(&path)?;
        let cfg: WorkspaceConfig = toml::from_str(&text).map_err(|e| CliError::file(&path, e.to_string()))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::file(
                &path,
                format!("unsupported schema_version {} (expected {SCHEMA_VERSION})", cfg.schema_version),
            ));
        }
        cfg.sync_policy(None, None).map_err(|e| CliError::file(&path, e.to_string()))?;
        cfg.match_anchor(None).map_err(|e| CliError::file(&path, e.to_string()))?;
        Ok(cfg)
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn sync_policy(&self, max_gap: Option<f64>, reference: Option<Reference>) -> Result<SyncPolicy> {
        let reference = match reference {
            Some(r) => r,
            None => self
                .sync
                .reference
                .parse()
                .map_err(|e: prismtrack_core::Error| CliError::Config(e.to_string()))?,
        };
        let policy = SyncPolicy {
            max_gap: max_gap.unwrap_or(self.sync.max_gap),
            reference,
            max_speed: self.sync.speed_gate.then_some(self.sync.max_speed),
        };
        policy.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(policy)
    }

    pub fn match_anchor(&self, flag: Option<MatchAnchor>) -> Result<MatchAnchor> {
        match flag {
            Some(a) => Ok(a),
            None => self
                .compare
                .match_anchor
                .parse()
                .map_err(|e: prismtrack_core::Error| CliError::Config(e.to_string())),
        }
    }
}

/// Files of one deployment, relative to its directory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentManifest {
    pub id: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rts: Option<RtsFiles>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gnss: Option<GnssFiles>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RtsFiles {
    /// Control-point shots, one file per station; the first station is the common frame.
    pub gcp: Vec<String>,
    /// One tracking log per prism.
    pub logs: Vec<String>,
    pub body: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GnssFiles {
    /// One log per antenna.
    pub logs: Vec<String>,
    pub origin: String,
    pub body: String,
}

impl ExperimentManifest {
    pub fn load(dir: &Path, expected_id: &str) -> Result<ExperimentManifest> {
        let path = dir.join(EXPERIMENT_FILE);
        if !path.exists() {
            return Err(CliError::file(&path, "experiment manifest not found"));
        }
        let text = fsio::read_string(&path)?;
        let m: ExperimentManifest = toml::from_str(&text).map_err(|e| CliError::file(&path, e.to_string()))?;
        if m.id != expected_id {
            return Err(CliError::file(&path, format!("id `{}` does not match directory `{expected_id}`", m.id)));
        }
        if m.rts.is_none() && m.gnss.is_none() {
            return Err(CliError::file(&path, "neither [rts] nor [gnss] is configured"));
        }
        Ok(m)
    }

    pub fn render(&self) -> String {
        toml::to_string(self).expect("manifest serializes")
    }
}

/// Experiment ids become directory names.
pub fn check_id(id: &str) -> Result<()> {
    let ok = !id.is_empty()
        && !id.contains("__")
        && id.chars().all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.'))
        && !id.starts_with('.');
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!(
            "invalid experiment id `{id}`: use letters, digits, '-', '_' or '.', without '__' or a leading '.'"
        )))
    }
}

pub fn resolve(dir: &Path, rel: &str) -> PathBuf {
    dir.join(rel)
}
