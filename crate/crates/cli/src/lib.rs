//! Command-line front end for `simplex-moments`.
//!
//! The binary prints a [`report::RunReport`] as JSON on stdout (or one
//! number per line with `--plain`) and writes every diagnostic to stderr.
//! Exit codes: 0 success, 2 input error, 3 numerical failure, 4 `compare`
//! deviation above tolerance.

pub mod args;
pub mod commands;
pub mod counts;
pub mod error;
pub mod report;

use simplex_moments::quadrature::DEFAULT_EVALUATION_BUDGET;

use crate::error::CliError;

/// Environment variable overriding the evaluation budget.
pub const BUDGET_ENV: &str = "SIMPLEX_MOMENTS_EVAL_BUDGET";

pub const EXIT_TOLERANCE: i32 = 4;

/// Reads the budget override, if set.
pub fn budget_from_env() -> Result<u64, CliError> {
    match std::env::var(BUDGET_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(DEFAULT_EVALUATION_BUDGET),
        Ok(text) => match text.trim().parse::<u64>() {
            Ok(b) if b > 0 => Ok(b),
            _ => Err(CliError::Input(format!(
                "{BUDGET_ENV}={text:?} is not a positive integer"
            ))),
        },
        Err(e) => Err(CliError::Input(format!("{BUDGET_ENV}: {e}"))),
    }
}
