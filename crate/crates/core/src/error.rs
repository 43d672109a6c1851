use std::path::PathBuf;

use crate::index::MultiIndex;

/// Errors raised by the quadrature library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {alpha} needs rule level {level}, but the rule family stops at level {max_level}")]
    LevelOverflow {
        alpha: MultiIndex,
        level: usize,
        max_level: usize,
    },

    #[error("integrand returned a non-finite value at y = {point:?}")]
    NonFinite { point: Vec<f64> },

    #[error("diffusion coefficient {value} is below the ellipticity threshold {threshold} at y = {point:?}")]
    Ellipticity {
        value: f64,
        threshold: f64,
        point: Vec<f64>,
    },

    #[error("matrix is not positive semidefinite: pivot {pivot} at step {step}")]
    NotPositiveSemidefinite { pivot: f64, step: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for failures of a numerical guard (non-finite values, loss of
    /// ellipticity, indefinite covariance) as opposed to bad input or I/O.
    pub fn is_numerical_guard(&self) -> bool {
        matches!(
            self,
            Error::NonFinite { .. } | Error::Ellipticity { .. } | Error::NotPositiveSemidefinite { .. }
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
