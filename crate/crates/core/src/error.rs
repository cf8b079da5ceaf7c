//! Error type shared by every module of the crate.

use alloc::string::String;
use core::fmt;

/// Failure modes of signal generation, sensing, quantization, and recovery.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A specification carried inconsistent or out-of-range parameters.
    InvalidSpec(String),
    /// Two operands disagreed on a dimension.
    DimensionMismatch { expected: usize, got: usize },
    /// The requested matrix family is not constructible at this size.
    UnsupportedMatrix { family: &'static str, m: usize, n: usize },
    /// A coefficient vector exceeded the register range required downstream.
    RangeViolation { max_abs: f64, bound: f64 },
    /// The least-squares system on the chosen support is numerically rank
    /// deficient; `cond` is the pivoted-QR condition estimate.
    RankDeficient { cond: f64 },
    /// An iterative solver's energy grew beyond its divergence guard.
    Diverged { energy: f64 },
    /// The Bayesian posterior covariance could not be inverted.
    SingularCovariance,
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidSpec(reason) => write!(f, "invalid specification: {reason}"),
            Error::DimensionMismatch { expected, got } => {
                write!(f, "dimension mismatch: expected {expected}, got {got}")
            }
            Error::UnsupportedMatrix { family, m, n } => {
                write!(f, "{family} matrix is not supported at size {m}x{n}")
            }
            Error::RangeViolation { max_abs, bound } => write!(
                f,
                "coefficient magnitude {max_abs} exceeds the register bound {bound}"
            ),
            Error::RankDeficient { cond } => write!(
                f,
                "support system is rank deficient (condition estimate {cond:.3e})"
            ),
            Error::Diverged { energy } => {
                write!(f, "iteration diverged (iterate energy {energy:.3e})")
            }
            Error::SingularCovariance => write!(f, "posterior covariance is singular"),
        }
    }
}

impl core::error::Error for Error {}

impl Error {
    /// Shorthand used by the spec validators.
    pub(crate) fn invalid(reason: impl fmt::Display) -> Self {
        Error::InvalidSpec(alloc::format!("{reason}"))
    }
}
