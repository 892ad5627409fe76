use thiserror::Error;

/// Errors raised by the exact and numeric routines of this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series has zero constant term")]
    ZeroConstantTerm,
    #[error("constant term not admissible: {0}")]
    BadConstantTerm(String),
    #[error("factor {index} deviates from 1 at u^{found}, below its declared weight {weight}")]
    WeightViolation { index: usize, weight: usize, found: usize },
    #[error("root series has a nonzero odd power x^{0}")]
    OddTermPresent(usize),
    #[error("constant term of the per-root factor is not invertible")]
    NonUnitConstant,
    #[error("dimension mismatch: {0}")]
    DimMismatch(String),
    #[error("real dimension {0} is not a multiple of 4")]
    DimNotMultipleOf4(usize),
    #[error("invalid hypersurface: {0}")]
    InvalidHypersurface(String),
    #[error("series is not in the span of the basis; first nonzero residual at u^{0}")]
    ResidualNonzero(usize),
    #[error("tau is not in the upper half plane")]
    NotInUpperHalfPlane,
    #[error("tolerance {tol:e} not reached after {iterations} iterations")]
    ToleranceNotReached { tol: f64, iterations: usize },
    #[error("exponent out of range: {0}")]
    ExponentRangeViolation(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
