use std::process::ExitCode;

use clap::Parser;
use tfdlab_cli::{emit, run, Cli, RunConfig};

fn main() -> ExitCode {
    let outcome = RunConfig::from_cli(Cli::parse()).and_then(|config| {
        let output = run(&config)?;
        for w in &output.warnings {
            eprintln!("tfdlab: warning: {w}");
        }
        emit(&config, &output, &mut std::io::stdout().lock())
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tfdlab: error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
