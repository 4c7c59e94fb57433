use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use qbracket::cli::{run, Cli, CliError, RunConfig, EXIT_IO};

fn emit(config: &RunConfig, payload: &[u8]) -> Result<(), CliError> {
    match config.output_path() {
        Some(path) => std::fs::write(&path, payload).map_err(|source| CliError::Io { path, source }),
        None => std::io::stdout().write_all(payload).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(&cli).and_then(|config| {
        let outcome = run(&config)?;
        emit(&config, &outcome.payload)?;
        for (label, elapsed) in &outcome.timings {
            eprintln!("{label}: {:.3}s", elapsed.as_secs_f64());
        }
        Ok(outcome.status)
    });
    let code = match result {
        Ok(status) => status,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    debug_assert!((0..=EXIT_IO).contains(&code));
    ExitCode::from(code as u8)
}
