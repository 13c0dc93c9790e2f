use std::process::ExitCode;

use clap::Parser;
use purespin_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = cli.into_config().and_then(|config| {
        let report = run(&config)?;
        let text = report.to_json();
        match &config.output {
            Some(path) => std::fs::write(path, &text).map_err(CliError::Io)?,
            None => print!("{text}"),
        }
        Ok(report.passed)
    });
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("purespin: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
