use thiserror::Error;

/// Errors raised by the field-theory kernels.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grade {0} is outside 0..=4")]
    GradeOutOfRange(usize),

    #[error("{context}: expected {expected}")]
    WrongGrade {
        context: &'static str,
        expected: &'static str,
    },

    #[error("{context}: {detail}")]
    InvalidArgument { context: &'static str, detail: String },

    #[error("lattice spec mismatch: {0}")]
    SpecMismatch(String),

    #[error("CFL violated: c*dt = {cdt:.6e} exceeds min(h)/sqrt(3) = {limit:.6e}")]
    Cfl { cdt: f64, limit: f64 },

    #[error("probe speed {speed:.6e} is not below the wave speed {c:.6e}")]
    Superluminal { speed: f64, c: f64 },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(context: &'static str, detail: impl Into<String>) -> Self {
        Error::InvalidArgument {
            context,
            detail: detail.into(),
        }
    }

    /// True for errors that abort a run for numerical reasons (CFL, superluminal, blow-up).
    pub fn is_numeric_abort(&self) -> bool {
        matches!(
            self,
            Error::Cfl { .. } | Error::Superluminal { .. } | Error::NonFinite(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
