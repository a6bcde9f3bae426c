use thiserror::Error;

/// Errors raised by the numeric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{function}: argument {value} outside the domain ({expected})")]
    Domain {
        function: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("integrand returned a negative value {value} at {point:?}")]
    NegativeIntegrand { value: f64, point: Vec<f64> },

    #[error("integrand returned a non-finite value at {point:?}")]
    NonFiniteIntegrand { point: Vec<f64> },

    #[error("integrand evaluation failed at {point:?}: {message}")]
    IntegrandFailed { message: String, point: Vec<f64> },

    #[error("{requested:.3e} evaluations requested, budget is {budget}")]
    BudgetExceeded { requested: f64, budget: u64 },

    #[error("no convergence to the requested tolerance after {evaluations} evaluations")]
    NonConvergence { evaluations: u64 },

    #[error("scheme `{scheme}` is not supported by {operation}")]
    UnsupportedScheme {
        scheme: &'static str,
        operation: &'static str,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
