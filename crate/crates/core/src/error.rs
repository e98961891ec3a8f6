use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// A violated inequality precondition.
///
/// `slack` is `rhs - lhs` of the inequality `lhs <= rhs` that was required,
/// so a failure always carries a negative slack.
#[derive(Debug, Clone, PartialEq)]
pub struct PreconditionFailure {
    pub name: String,
    pub slack: f64,
}

impl PreconditionFailure {
    pub fn new(name: impl Into<String>, slack: f64) -> Self {
        Self {
            name: name.into(),
            slack,
        }
    }
}

impl fmt::Display for PreconditionFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "precondition `{}` failed (slack {:e})", self.name, self.slack)
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: String, found: String },

    #[error("matrix is not symmetric: asymmetry {asymmetry:e} exceeds {limit:e}")]
    NotSymmetric { asymmetry: f64, limit: f64 },

    #[error("eigendecomposition did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("z = {re}{im:+}i lies within {distance:e} of eigenvalue {eigenvalue}")]
    NearSpectrum {
        re: f64,
        im: f64,
        eigenvalue: f64,
        distance: f64,
    },

    #[error("{0}")]
    Precondition(PreconditionFailure),

    #[error("eigenvalue gap at index {index} is zero")]
    DegenerateGap { index: usize },

    #[error("contour enclosure violated: {0}")]
    Enclosure(String),

    #[error("quadrature did not converge after {refinements} refinements (estimated error {estimate:e})")]
    QuadratureNoConvergence { refinements: usize, estimate: f64 },

    #[error("power iteration broke down at iteration {iteration}: A v is zero")]
    PowerBreakdown { iteration: usize },

    #[error("matrix market parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl From<PreconditionFailure> for Error {
    fn from(p: PreconditionFailure) -> Self {
        Error::Precondition(p)
    }
}

/// Returns `Ok(())` if `lhs <= rhs`, otherwise a precondition failure named `name`.
pub(crate) fn require_le(name: &str, lhs: f64, rhs: f64) -> std::result::Result<(), PreconditionFailure> {
    if lhs <= rhs {
        Ok(())
    } else {
        Err(PreconditionFailure::new(name, rhs - lhs))
    }
}
