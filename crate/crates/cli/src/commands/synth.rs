//! Scenario file:
//!
//! ```toml
//! [path]
//! kind = "line"           # line | circle | lawnmower | waypoints
//! speed = 1.0             # m/s
//! duration = 60.0         # s
//! rate = 2.5              # Hz, optional
//! heading = 0.0           # line: rad from +x
//! # radius = 10.0         # circle
//! # leg_length = 20.0     # lawnmower
//! # spacing = 4.0         # lawnmower
//! # waypoints = [[0.0, 0.0, 0.0], [10.0, 0.0, 0.0]]
//! origin = [8.0, 6.0, -1.2]
//!
//! [noise]                 # every key optional
//! rts_sigma_xyz = 0.003
//! gnss_sigma_horizontal = 0.010
//! gnss_sigma_vertical = 0.020
//! timestamp_jitter = 0.02
//! gcp_sigma = 0.0005
//! gnss_bias = 0.0
//! seed = 0
//!
//! [site]                  # every key optional
//! latitude = 46.78        # degrees
//! longitude = -71.27
//! height = 100.0
//! rts_stream_offset = 0.1333   # s between consecutive RTS clocks
//! ```

use std::path::Path;

use prismtrack_core::files::{render_body_calibration, render_gnss_log, render_origin, render_poses, render_rts_log};
use prismtrack_core::synth::{generate_ground_truth, sample_observations};
use prismtrack_core::{GeodeticOrigin, NoiseModel, PathKind, PathSpec, Point3, Scenario};
use serde::Deserialize;

use crate::config::{check_id, ExperimentManifest, GnssFiles, RtsFiles, WorkspaceConfig, EXPERIMENT_FILE, WORKSPACE_FILE};
use crate::error::{CliError, Result};
use crate::fsio;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    path: PathTable,
    #[serde(default)]
    noise: NoiseTable,
    #[serde(default)]
    site: SiteTable,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct PathTable {
    kind: String,
    speed: f64,
    duration: f64,
    rate: Option<f64>,
    heading: Option<f64>,
    radius: Option<f64>,
    leg_length: Option<f64>,
    spacing: Option<f64>,
    waypoints: Option<Vec<[f64; 3]>>,
    origin: Option<[f64; 3]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct NoiseTable {
    rts_sigma_xyz: Option<f64>,
    gnss_sigma_horizontal: Option<f64>,
    gnss_sigma_vertical: Option<f64>,
    timestamp_jitter: Option<f64>,
    gcp_sigma: Option<f64>,
    gnss_bias: Option<f64>,
    seed: Option<u64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct SiteTable {
    latitude: Option<f64>,
    longitude: Option<f64>,
    height: Option<f64>,
    rts_stream_offset: Option<f64>,
}

fn required(v: Option<f64>, kind: &str, key: &str) -> Result<f64> {
    v.ok_or_else(|| CliError::Config(format!("path kind `{kind}` needs `{key}`")))
}

fn path_spec(p: &PathTable) -> Result<PathSpec> {
    let k = p.kind.as_str();
    let kind = match k {
        "line" => PathKind::Line { heading: p.heading.unwrap_or(0.0) },
        "circle" => PathKind::Circle { radius: required(p.radius, k, "radius")? },
        "lawnmower" => PathKind::Lawnmower {
            leg_length: required(p.leg_length, k, "leg_length")?,
            spacing: required(p.spacing, k, "spacing")?,
        },
        "waypoints" => PathKind::Waypoints(
            p.waypoints
                .as_ref()
                .ok_or_else(|| CliError::Config("path kind `waypoints` needs `waypoints`".into()))?
                .iter()
                .map(|w| Point3::from(*w))
                .collect(),
        ),
        other => {
            return Err(CliError::Config(format!(
                "unknown path kind `{other}`; expected line, circle, lawnmower or waypoints"
            )))
        }
    };
    let spec = PathSpec::new(kind, p.speed, p.duration, p.rate.unwrap_or(2.5))
        .with_origin(p.origin.map(Point3::from).unwrap_or_else(Point3::zeros));
    spec.validate().map_err(|e| CliError::Config(e.to_string()))?;
    Ok(spec)
}

fn noise_model(n: &NoiseTable, seed: Option<u64>) -> NoiseModel {
    let d = NoiseModel::default();
    NoiseModel {
        rts_sigma_xyz: n.rts_sigma_xyz.unwrap_or(d.rts_sigma_xyz),
        gnss_sigma_horizontal: n.gnss_sigma_horizontal.unwrap_or(d.gnss_sigma_horizontal),
        gnss_sigma_vertical: n.gnss_sigma_vertical.unwrap_or(d.gnss_sigma_vertical),
        timestamp_jitter: n.timestamp_jitter.unwrap_or(d.timestamp_jitter),
        gcp_sigma: n.gcp_sigma.unwrap_or(d.gcp_sigma),
        gnss_bias: n.gnss_bias.unwrap_or(d.gnss_bias),
        seed: seed.or(n.seed).unwrap_or(d.seed),
    }
}

pub fn run(spec_path: &Path, root: &Path, id: &str, seed: Option<u64>) -> Result<()> {
    check_id(id)?;
    let text = fsio::read_string(spec_path)?;
    let file: ScenarioFile = toml::from_str(&text).map_err(|e| CliError::file(spec_path, e.to_string()))?;
    let path = path_spec(&file.path)?;
    let noise = noise_model(&file.noise, seed);
    let mut scenario = Scenario::standard(path, noise).map_err(|e| CliError::Config(e.to_string()))?;
    let site = &file.site;
    if site.latitude.is_some() || site.longitude.is_some() || site.height.is_some() {
        let o = &scenario.origin;
        scenario.origin = GeodeticOrigin::from_degrees(
            site.latitude.unwrap_or(o.latitude.to_degrees()),
            site.longitude.unwrap_or(o.longitude.to_degrees()),
            site.height.unwrap_or(o.ellipsoidal_height),
        )
        .map_err(|e| CliError::Config(e.to_string()))?;
    }
    if let Some(offset) = site.rts_stream_offset {
        scenario.rts_stream_offset = offset;
    }
    let exp = sample_observations(&scenario).map_err(|e| CliError::core("simulation", e))?;

    let ws_config = root.join(WORKSPACE_FILE);
    if !ws_config.exists() {
        fsio::write(&ws_config, WorkspaceConfig::default().render())?;
    }
    let dir = root.join(id);
    let mut rts_logs = Vec::new();
    for log in &exp.rts {
        let target = log.target.expect("simulated logs name their target");
        let rel = format!("raw/rts_{target}.csv");
        fsio::write(&dir.join(&rel), render_rts_log(log))?;
        rts_logs.push(rel);
    }
    let mut gcp = Vec::new();
    for log in &exp.gcp_shots {
        let rel = format!("raw/gcp_{}.csv", log.station);
        fsio::write(&dir.join(&rel), render_rts_log(log))?;
        gcp.push(rel);
    }
    let mut gnss_logs = Vec::new();
    for log in &exp.gnss {
        let target = log.target.expect("simulated logs name their target");
        let rel = format!("raw/gnss_{target}.csv");
        fsio::write(&dir.join(&rel), render_gnss_log(log))?;
        gnss_logs.push(rel);
    }
    fsio::write(&dir.join("raw/origin.csv"), render_origin(&scenario.origin))?;
    fsio::write(&dir.join("calib/body_rts.csv"), render_body_calibration(&scenario.prisms))?;
    fsio::write(&dir.join("calib/body_gnss.csv"), render_body_calibration(&scenario.antennas))?;
    let truth = generate_ground_truth(&scenario.path);
    fsio::write(&dir.join("truth.csv"), render_poses(truth.iter().map(|p| (p.t, &p.transform))))?;

    let manifest = ExperimentManifest {
        id: id.to_string(),
        rts: Some(RtsFiles { gcp, logs: rts_logs, body: "calib/body_rts.csv".into() }),
        gnss: Some(GnssFiles { logs: gnss_logs, origin: "raw/origin.csv".into(), body: "calib/body_gnss.csv".into() }),
    };
    fsio::write(&dir.join(EXPERIMENT_FILE), manifest.render())?;
    println!("{id}: {} truth poses, seed {}", truth.len(), scenario.noise.seed);
    Ok(())
}
