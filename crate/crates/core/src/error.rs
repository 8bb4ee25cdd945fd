use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Failure modes shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A precondition or hypothesis was violated; the message names it.
    Domain(String),
    /// An iterative procedure ran out of budget. Carries the best estimate.
    Convergence {
        what: &'static str,
        estimate: f64,
        error_estimate: f64,
    },
    /// A discretization would exceed the configured size cap.
    Resource { requested: usize, cap: usize },
    /// A bound was requested outside the parameter regime it is valid in.
    WrongRegime(&'static str),
    /// A matrix that must be inverted is numerically singular.
    Singular(&'static str),
    /// No admissible shift was found below the cap.
    NoOmega { last_omega: f64, last_norm: f64 },
    /// A holomorphic function was expected to be normalized to 1 at the origin.
    Normalization { value: Complex64 },
    /// Evaluation at a pole.
    Pole(&'static str),
    /// The eigensolver did not certify every eigenvalue.
    PartialSpectrum {
        eigenvalues: Vec<Complex64>,
        uncertified: Vec<usize>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(msg) => write!(f, "domain error: {msg}"),
            Error::Convergence {
                what,
                estimate,
                error_estimate,
            } => write!(
                f,
                "{what} did not converge (best estimate {estimate:e}, error estimate {error_estimate:e})"
            ),
            Error::Resource { requested, cap } => {
                write!(f, "grid of {requested} points exceeds the cap of {cap}")
            }
            Error::WrongRegime(msg) => write!(f, "wrong parameter regime: {msg}"),
            Error::Singular(what) => write!(f, "singular matrix: {what}"),
            Error::NoOmega {
                last_omega,
                last_norm,
            } => write!(
                f,
                "no admissible omega up to {last_omega}: norm there is {last_norm}"
            ),
            Error::Normalization { value } => {
                write!(f, "function must equal 1 at the origin, got {value}")
            }
            Error::Pole(what) => write!(f, "evaluation at a pole: {what}"),
            Error::PartialSpectrum { uncertified, .. } => write!(
                f,
                "eigensolver left {} eigenvalue(s) uncertified",
                uncertified.len()
            ),
        }
    }
}

impl core::error::Error for Error {}
