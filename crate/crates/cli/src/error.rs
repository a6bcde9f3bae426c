use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }
}

/// Library errors caused by the arguments map to input errors; the rest are
/// numerical failures.
impl From<simplex_moments::Error> for CliError {
    fn from(e: simplex_moments::Error) -> Self {
        use simplex_moments::Error as E;
        match e {
            E::Domain { .. } | E::InvalidInput(_) | E::IndexOutOfRange { .. } => {
                CliError::Input(e.to_string())
            }
            _ => CliError::Numerical(e.to_string()),
        }
    }
}
