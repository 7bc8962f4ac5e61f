use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use orderflow::{run, Cli, CliError, RunConfig};

fn main() -> ExitCode {
    let cli = Cli::parse();
    eprintln!("# run: {}", RunConfig::from_cli(&cli).to_json());
    match run(&cli).and_then(|outcome| emit(&cli, &outcome.output).map(|()| outcome.notes)) {
        Ok(notes) => {
            for n in notes {
                eprintln!("{n}");
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            if let CliError::Usage(_) = e {
                eprintln!("error: {e}\n\nFor usage, run `orderflow --help`.");
            } else {
                eprintln!("{e}");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn emit(cli: &Cli, output: &str) -> Result<(), CliError> {
    match &cli.common.out {
        Some(path) => std::fs::write(path, output)?,
        None => std::io::stdout().write_all(output.as_bytes())?,
    }
    Ok(())
}
