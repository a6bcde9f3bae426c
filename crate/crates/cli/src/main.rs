use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use simplex_moments_cli::args::Cli;
use simplex_moments_cli::commands::execute;
use simplex_moments_cli::{budget_from_env, EXIT_TOLERANCE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let argv: Vec<String> = std::env::args().skip(1).collect();

    let outcome = budget_from_env().and_then(|budget| execute(cli, argv, budget));
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };

    for note in &outcome.report.diagnostics.notes {
        eprintln!("note: {note}");
    }
    let text = if outcome.plain {
        outcome.report.to_plain()
    } else {
        outcome.report.to_json()
    };
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::FAILURE;
    }
    if let Some(message) = outcome.breach {
        eprintln!("tolerance breach: {message}");
        return ExitCode::from(EXIT_TOLERANCE as u8);
    }
    ExitCode::SUCCESS
}
