use std::process::ExitCode;

use clap::Parser;
use czlab_cli::commands::{effective_seed, SEED_ENV};
use czlab_cli::{io, run, CliError, RunConfig};

fn main() -> ExitCode {
    let config = RunConfig::parse();
    match execute(&config) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            let report = serde_json::to_string(&e.to_report()).unwrap_or_else(|_| e.to_string());
            eprintln!("{report}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn execute(config: &RunConfig) -> Result<i32, CliError> {
    let env = std::env::var(SEED_ENV).ok();
    let seed = effective_seed(config.seed, env.as_deref())?;
    let outcome = run(config, seed)?;
    io::write_output(&outcome.text, config.output.as_deref())?;
    Ok(outcome.exit_code())
}
