use std::time::Duration;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// The instance failed semantic validation; the message lists the violations.
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("parse error: {0}")]
    Parse(String),

    /// The document parsed but does not match the schema.
    #[error("schema error: {0}")]
    Schema(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// The solver process failed or produced unusable output.
    #[error("backend error: {0}")]
    Backend(String),

    #[error("solve exceeded the wall-clock limit of {0:?}")]
    Timeout(Duration),

    /// A model that should always be satisfiable came back infeasible.
    #[error("unexpected infeasibility: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
