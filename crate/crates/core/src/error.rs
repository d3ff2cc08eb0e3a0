use thiserror::Error;

use crate::classify::AsymptoticReport;
use crate::expr::ParseError;

pub type Result<T, E = GnaError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum GnaError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("operands are sampled on different grids")]
    GridMismatch,

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("scalar is not invertible: classified {}", .report.classification)]
    NonInvertibleScalar { report: Box<AsymptoticReport> },

    #[error("domain error at k = {index}: {what}")]
    Domain { index: i64, what: String },

    #[error("division by zero at k = {index}")]
    DivisionByZero { index: i64 },

    #[error("matrix is singular: determinant classified {}", .report.classification)]
    SingularMatrix { report: Box<AsymptoticReport> },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("vectors are not free: Gram determinant classified {}", .report.classification)]
    NotFree { report: Box<AsymptoticReport> },

    #[error("zero-divisor split failed its post-check: {0}")]
    SplitFailure(String),

    #[error("symmetry check failed: {0}")]
    Symmetry(String),

    #[error("invalid symplectic form: {0}")]
    InvalidForm(String),

    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Coarse grouping used by the CLI to pick an exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorCategory {
    /// Malformed input: bad configuration, shapes, parse or evaluation errors.
    Input,
    /// A mathematical precondition does not hold for the given data.
    Precondition,
    /// An internal result failed its own verification.
    Postcondition,
}

impl GnaError {
    pub fn category(&self) -> ErrorCategory {
        use GnaError::*;
        match self {
            Config(_) | GridMismatch | Shape(_) | Domain { .. } | DivisionByZero { .. } | Parse(_) | Unsupported(_) => {
                ErrorCategory::Input
            }
            NonInvertibleScalar { .. }
            | SingularMatrix { .. }
            | Precondition(_)
            | NotFree { .. }
            | Symmetry(_)
            | InvalidForm(_) => ErrorCategory::Precondition,
            SplitFailure(_) | PostconditionFailed(_) => ErrorCategory::Postcondition,
        }
    }

    /// The classifier evidence attached to the error, if any.
    pub fn report(&self) -> Option<&AsymptoticReport> {
        match self {
            GnaError::NonInvertibleScalar { report }
            | GnaError::SingularMatrix { report }
            | GnaError::NotFree { report } => Some(report),
            _ => None,
        }
    }
}
