use thiserror::Error;

/// Front-end errors with their process exit codes: schema and range
/// problems exit 2, a failed tree/operator cross-check exits 3, anything
/// else exits 1.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("schema error: {0}")]
    Schema(String),

    #[error("range error: {0}")]
    Range(String),

    #[error("cross-check failure: tree and operator probabilities deviate by {deviation}")]
    CrossCheck { deviation: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Core(#[from] unsharp_core::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Schema(_) | CliError::Range(_) => 2,
            CliError::CrossCheck { .. } => 3,
            CliError::Io(_) | CliError::Core(_) => 1,
        }
    }
}
