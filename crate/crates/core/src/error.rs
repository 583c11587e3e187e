use thiserror::Error;

/// Errors raised by deployment sampling, planning, transport and experiments.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A caller broke a documented precondition (unsorted input, length mismatch, ...).
    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error(
        "infeasible plan: anchor spacing {spacing} is below interference distance {interference}"
    )]
    InfeasiblePlan { spacing: f64, interference: f64 },

    #[error("power-law fit unavailable: {0}")]
    FitUnavailable(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::ContractViolation(msg.into())
}
