//! Command-line front end: workspace configuration, experiment bundles,
//! reports and plot exports around `prismtrack-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod fsio;
pub mod report;
pub mod workspace;

use cli::{Cli, Command};
use error::Result;
use workspace::Workspace;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Calibrate { workspace, id } => commands::calibrate::run(&Workspace::open(&workspace)?, &id),
        Command::Reconstruct { workspace, id, system, max_gap, reference, admit_float } => commands::reconstruct::run(
            &Workspace::open(&workspace)?,
            &id,
            &commands::reconstruct::Options { system, max_gap, reference, admit_float },
        ),
        Command::Evaluate { workspace, id, system, exclude_outliers } => {
            commands::evaluate::run(&Workspace::open(&workspace)?, &id, system, exclude_outliers)
        }
        Command::Compare { workspace, a, b, radius, match_anchor, system, exclude_outliers } => commands::compare::run(
            &Workspace::open(&workspace)?,
            &a,
            &b,
            &commands::compare::Options { radius, match_anchor, system, exclude_outliers },
        ),
        Command::Synth { spec, workspace, id, seed } => commands::synth::run(&spec, &workspace, &id, seed),
    }
}
