use thiserror::Error;

use crate::group::Frame;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point is in the {found:?} frame, expected {expected:?}")]
    FrameMismatch { expected: Frame, found: Frame },

    #[error("exponent must be a positive integer, got {0}")]
    InvalidExponent(u32),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("input is not in {set} (residual {residual:e} > tolerance {tol:e})")]
    NotMember {
        set: &'static str,
        residual: f64,
        tol: f64,
    },

    /// No Gamma-image of a reconstructed point lies in M. Signals numerical
    /// breakdown, not a mathematical failure.
    #[error("no Gamma-image lies within tolerance of M (best residual {residual:e})")]
    Inconsistent { residual: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
