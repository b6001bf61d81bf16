use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Every channel amplitude is zero, so the aligned maximum is zero.
    #[error("degenerate channel: all amplitudes are zero")]
    DegenerateChannel,

    /// Probe magnitudes that no physical state can produce.
    #[error("inconsistent probes: discriminant {discriminant:e} below tolerance -{tolerance:e}")]
    NumericInconsistency { discriminant: f64, tolerance: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("validation error: {field}: {message}")]
    Validation { field: &'static str, message: String },

    #[error("i/o error: {0}")]
    Io(#[from] io::Error),

    /// Some trials of an experiment failed after the rest completed.
    #[error("{failed} trial(s) failed; first: {first}")]
    TrialsFailed {
        failed: usize,
        first: String,
        exit_code: i32,
    },

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn validation(field: &'static str, message: impl Into<String>) -> Self {
        Error::Validation {
            field,
            message: message.into(),
        }
    }

    /// Process exit status for this error: 1 validation, 2 I/O, 3 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidArgument(_) | Error::Config(_) | Error::Validation { .. } => 1,
            Error::Io(_) => 2,
            Error::DegenerateChannel | Error::NumericInconsistency { .. } => 3,
            Error::TrialsFailed { exit_code, .. } => *exit_code,
            Error::Trial { source, .. } => source.exit_code(),
        }
    }
}
