use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Whether a failure comes from bad input or from a numerical procedure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Numerical,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid profile: {0}")]
    InvalidProfile(String),

    #[error("profile is not strictly positive (minimum {min})")]
    NonPositiveProfile { min: f64 },

    #[error("mean growth rate {mean} is not positive")]
    NonPositiveMeanGrowth { mean: f64 },

    #[error("growth rate has nonzero mean {mean}")]
    NotMeanZero { mean: f64 },

    #[error("growth rate vanishes identically")]
    IdenticallyZeroGrowth,

    #[error("invalid patch geometry: {0}")]
    InvalidPatchGeometry(String),

    #[error("{0}")]
    InvalidParameter(String),

    #[error("Perron pair lost positivity at lambda*L = {lambda_l} with n = {n}; refine the grid")]
    PerronFailure { lambda_l: f64, n: usize },

    #[error("eigen iteration did not converge after {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("no interior minimum of k(lambda)/lambda for lambda in [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("argument s = {s} outside the domain of the dispersion relation (m = {m})")]
    DomainError { s: f64, m: f64 },

    #[error("dispersion relation has no root above m = {m} at lambda = {lambda}")]
    NoRootAboveM { lambda: f64, m: f64 },

    #[error("simulation blew up at t = {time}")]
    BlowUp { time: f64 },

    #[error("front reached the domain boundary at t = {time}")]
    FrontExited { time: f64 },

    #[error("front trace has {len} crossings, at least {required} are needed")]
    InsufficientTrace { len: usize, required: usize },
}

impl Error {
    /// Stable identifier of the violated contract, used in diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidProfile(_) => "InvalidProfile",
            Error::NonPositiveProfile { .. } => "NonPositiveProfile",
            Error::NonPositiveMeanGrowth { .. } => "NonPositiveMeanGrowth",
            Error::NotMeanZero { .. } => "NotMeanZero",
            Error::IdenticallyZeroGrowth => "IdenticallyZeroGrowth",
            Error::InvalidPatchGeometry(_) => "InvalidPatchGeometry",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::PerronFailure { .. } => "PerronFailure",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::BracketFailure { .. } => "BracketFailure",
            Error::DomainError { .. } => "DomainError",
            Error::NoRootAboveM { .. } => "NoRootAboveM",
            Error::BlowUp { .. } => "BlowUp",
            Error::FrontExited { .. } => "FrontExited",
            Error::InsufficientTrace { .. } => "InsufficientTrace",
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::PerronFailure { .. }
            | Error::NonConvergence { .. }
            | Error::BracketFailure { .. }
            | Error::NoRootAboveM { .. }
            | Error::BlowUp { .. }
            | Error::FrontExited { .. } => ErrorClass::Numerical,
            _ => ErrorClass::Validation,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
