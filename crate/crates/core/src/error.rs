use thiserror::Error;

/// Errors reported by the analysis and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument fell outside the domain of a special function.
    #[error("domain error in {function}: {message}")]
    Domain {
        function: &'static str,
        message: String,
    },

    /// A quadrature order outside the supported 1..=64 range.
    #[error("quadrature order {0} out of range (1..=64)")]
    QuadratureOrder(usize),

    /// The symmetric tridiagonal eigensolver failed to converge.
    #[error("eigenvalue iteration failed to converge")]
    EigenConvergence,

    /// A scenario parameter violated its constraints.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The moment-matching fit produced a non-positive shaping parameter.
    #[error("distribution fit failed: {0}")]
    FitFailure(String),

    /// Too few Monte Carlo trials requested.
    #[error("at least {min} trials required, got {got}")]
    TooFewTrials { min: u64, got: u64 },

    /// An empty branch list was passed to the selector.
    #[error("cannot select from an empty branch list")]
    EmptyBranchList,

    /// Chernoff parameter outside the open interval (0, 1/2).
    #[error("Chernoff parameter {0} outside (0, 0.5)")]
    ChernoffParameter(f64),

    /// The leading-order scaling form needs at least two surfaces.
    #[error("the leading-order sum-rate form requires K >= 2, got K = {0}")]
    LeadingFormNeedsK2(usize),
}

pub(crate) fn domain(function: &'static str, message: impl Into<String>) -> Error {
    Error::Domain {
        function,
        message: message.into(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
