use std::process::ExitCode;

use clap::Parser;
use prismtrack_cli::cli::Cli;

fn main() -> ExitCode {
    match prismtrack_cli::run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
