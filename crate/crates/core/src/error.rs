use thiserror::Error;

use crate::geom::Window;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("window {inner} does not fit inside {outer}")]
    WindowTooLarge { inner: Window, outer: Window },

    #[error("dimension mismatch: expected d = {expected}, got d = {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("argument must be non-negative, got {0}")]
    NegativeArgument(f64),

    #[error("{context}: no convergence after {iterations} iterations")]
    NoConvergence { context: &'static str, iterations: usize },

    #[error("matrix dimension {n} exceeds the cap of {cap}")]
    DimensionTooLarge { n: usize, cap: usize },

    #[error("k = {k} lies on the pure-point support; the diffuse density is undefined there")]
    AtomLocation { k: f64 },

    #[error("h is singular at k = {k}")]
    SingularPoint { k: f64 },

    #[error("estimator needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("grid functions are defined on different grids")]
    GridMismatch,

    #[error("every grid point falls inside an excluded band")]
    AllPointsExcluded,

    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
