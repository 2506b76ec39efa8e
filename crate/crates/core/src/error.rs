//! Error type shared by every stage of the pipeline.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("matrix is not symmetric (relative asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    /// Sample covariance too ill-conditioned to invert.
    #[error("singular covariance (condition estimate {condition:.3e})")]
    SingularCovariance { condition: f64 },

    #[error("octave {requested} infeasible for n = {n}; last feasible octave is {last_feasible}")]
    InfeasibleOctave {
        requested: u32,
        n: usize,
        last_feasible: u32,
    },

    #[error("estimate undefined: {0}")]
    Undefined(String),

    #[error("{0}")]
    Numerical(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("format error: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidParameter { .. } => "invalid_parameter",
            Error::Shape(_) => "shape",
            Error::NotSymmetric { .. } => "not_symmetric",
            Error::SingularCovariance { .. } => "singular_covariance",
            Error::InfeasibleOctave { .. } => "infeasible_octave",
            Error::Undefined(_) => "undefined",
            Error::Numerical(_) => "numerical",
            Error::Io(_) => "io",
            Error::Format(_) => "format",
        }
    }

    /// Whether the failure stems from the inputs (configuration, files)
    /// rather than from the computation.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::Shape(_) | Error::Io(_) | Error::Format(_)
        )
    }
}
