use std::process::ExitCode;

use clap::Parser;
use covermonoid_cli::{configure_threads, emit, execute, Cli, CliError};

fn run(cli: &Cli) -> Result<Option<String>, CliError> {
    configure_threads()?;
    let rendered = execute(cli)?;
    emit(cli, &rendered.output)?;
    Ok(rendered.failure)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(failure)) => {
            eprintln!("{failure}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
