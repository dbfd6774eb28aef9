use thiserror::Error;

/// Errors surfaced by the simulation pipeline.
///
/// The categories map onto the CLI exit classes: config problems are user
/// errors, domain/geometry/parameter errors are bad inputs to an operation,
/// numeric errors indicate a diverged integration.
#[derive(Debug, Error)]
pub enum GlvError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, GlvError>;
