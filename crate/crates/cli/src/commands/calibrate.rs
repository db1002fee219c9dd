use prismtrack_core::pipeline::{calibrate_stations, StationSolution};
use prismtrack_core::{FrameId, RigidTransform};
use nalgebra::Matrix3;

use crate::error::{CliError, Result};
use crate::fsio;
use crate::report::{StationRecord, StationsFile, REPORT_SCHEMA_VERSION, TOOL_VERSION};
use crate::workspace::{Experiment, System, Workspace};

pub fn run(ws: &Workspace, id: &str) -> Result<()> {
    let exp = ws.experiment(id)?;
    for system in System::ALL.into_iter().filter(|s| exp.has(*s)) {
        exp.body_calibration(system)?;
    }
    if exp.has(System::Gnss) {
        exp.origin()?;
    }
    if !exp.has(System::Rts) {
        println!("{id}: body calibration and origin are valid; no stations to calibrate");
        return Ok(());
    }

    let shots = exp.gcp_logs()?;
    let solutions = calibrate_stations(&shots).map_err(|e| CliError::core(format!("{id}: station calibration"), e))?;
    let stations: Vec<StationRecord> = solutions.iter().zip(&shots).map(|(s, log)| record(s, log.observations.len())).collect();
    for s in &stations {
        println!("{id}: {} rmse {} m over {} control points", s.station, s.rmse, s.gcp_count);
        if let Some(w) = &s.warning {
            eprintln!("warning: {id}: {}: {w}", s.station);
        }
    }
    let file = StationsFile {
        schema_version: REPORT_SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        experiment: id.to_string(),
        reference_station: solutions[0].station.to_string(),
        stations,
    };
    fsio::write_json(&exp.stations_path(), &file)
}

fn record(s: &StationSolution, gcp_count: usize) -> StationRecord {
    let r = s.transform.rotation();
    let t = s.transform.translation();
    StationRecord {
        station: s.station.to_string(),
        rotation: [0, 1, 2].map(|i| [r[(i, 0)], r[(i, 1)], r[(i, 2)]]),
        translation: [t.x, t.y, t.z],
        quaternion: s.transform.quaternion(),
        rmse: s.rmse(),
        gcp_count,
        residuals: s.alignment.as_ref().map(|a| a.per_point_residuals.clone()).unwrap_or_default(),
        warning: s.warning.clone(),
    }
}

/// Station extrinsics written by `calibrate`.
pub fn load(exp: &Experiment) -> Result<Vec<StationSolution>> {
    let path = exp.stations_path();
    if !path.is_file() {
        return Err(CliError::file(&path, "not found; run `prismtrack calibrate` first"));
    }
    let file: StationsFile = fsio::read_json(&path)?;
    let reference = FrameId::new(&file.reference_station).map_err(|e| CliError::data(&path, e))?;
    file.stations
        .iter()
        .map(|s| {
            let station = FrameId::new(&s.station).map_err(|e| CliError::data(&path, e))?;
            let rotation = Matrix3::from_fn(|i, j| s.rotation[i][j]);
            let translation = s.translation.into();
            let transform = RigidTransform::new(rotation, translation, station.clone(), reference.clone())
                .map_err(|e| CliError::data(&path, e))?;
            Ok(StationSolution { station, transform, alignment: None, warning: s.warning.clone() })
        })
        .collect()
}
