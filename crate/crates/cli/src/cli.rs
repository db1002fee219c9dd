use std::path::PathBuf;

use clap::{Parser, Subcommand};
use prismtrack_core::{MatchAnchor, Reference};

use crate::workspace::System;

/// Ground-truth trajectories from robotic total stations and RTK-GNSS.
#[derive(Debug, Parser)]
#[command(name = "prismtrack", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate station extrinsics from control-point shots and validate body calibrations.
    Calibrate {
        workspace: PathBuf,
        id: String,
    },
    /// Synchronize target streams and reconstruct six-DOF poses.
    Reconstruct {
        workspace: PathBuf,
        id: String,
        #[arg(long, value_enum)]
        system: System,
        /// Longest interval (s) that may be interpolated across.
        #[arg(long)]
        max_gap: Option<f64>,
        /// `stream0` or `grid:<step>`.
        #[arg(long)]
        reference: Option<Reference>,
        /// Also accept RTK float fixes.
        #[arg(long)]
        admit_float: bool,
    },
    /// Inter-distance errors of one experiment.
    Evaluate {
        workspace: PathBuf,
        id: String,
        /// Only this system; default is every reconstructed one.
        #[arg(long, value_enum)]
        system: Option<System>,
        /// Drop triplets whose pose was flagged as an outlier.
        #[arg(long)]
        exclude_outliers: bool,
    },
    /// Inter-experiment disparities between two experiments.
    Compare {
        workspace: PathBuf,
        a: String,
        b: String,
        /// Largest anchor separation (m) for a match.
        #[arg(long)]
        radius: Option<f64>,
        /// `target0` or `centroid`.
        #[arg(long)]
        match_anchor: Option<MatchAnchor>,
        #[arg(long, value_enum)]
        system: Option<System>,
        #[arg(long)]
        exclude_outliers: bool,
    },
    /// Write a simulated experiment into a workspace.
    Synth {
        /// Scenario file (TOML).
        spec: PathBuf,
        workspace: PathBuf,
        #[arg(long, default_value = "synth")]
        id: String,
        /// Overrides the scenario's noise seed.
        #[arg(long)]
        seed: Option<u64>,
    },
}
