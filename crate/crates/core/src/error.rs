use std::path::PathBuf;

/// Errors raised across the library. The CLI maps each kind to an exit code.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A scalar parameter is outside its admissible range (e.g. `lambda <= 0`).
    #[error("invalid parameter {name} = {value}: {reason}")]
    Parameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("dimension mismatch in {context}: expected {expected}, got {actual}")]
    Dimension {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    /// Malformed input that is not a single out-of-range scalar.
    #[error("invalid input: {0}")]
    Input(String),

    #[error("degenerate precoder: shaping matrix is identically zero")]
    DegeneratePrecoder,

    #[error("large-system limit undefined: {0}")]
    UndefinedLimit(&'static str),

    #[error("matrix is not positive definite ({0})")]
    NotPositiveDefinite(&'static str),

    #[error("I/O failure on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("sweep point {variable} = {value}: {source}")]
    SweepPoint {
        variable: &'static str,
        value: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code: 2 invalid input, 3 numerical failure, 4 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) | Error::Dimension { .. } => 2,
            Error::Parameter { .. }
            | Error::DegeneratePrecoder
            | Error::UndefinedLimit(_)
            | Error::NotPositiveDefinite(_) => 3,
            Error::Io { .. } => 4,
            Error::Csv(e) if e.is_io_error() => 4,
            Error::Csv(_) => 2,
            Error::SweepPoint { source, .. } => source.exit_code(),
        }
    }

    pub(crate) fn parameter(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::Parameter {
            name,
            value,
            reason,
        }
    }
}

/// Rejects anything that is not a finite, strictly positive number.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::parameter(name, value, "must be finite and > 0"))
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::parameter(name, value, "must be finite and >= 0"))
    }
}
