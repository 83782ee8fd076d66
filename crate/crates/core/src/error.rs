use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The linearised steady-state system has no unique solution.
    #[error("steady-state system is rank deficient (pivot ratio {pivot_ratio:.3e}); steady state is not unique")]
    SingularSystem { pivot_ratio: f64 },

    #[error("steady state has population {value:.3e} < 0 on level {level}")]
    NonPhysical { level: usize, value: f64 },

    #[error("susceptibility needs a positive probe Rabi frequency")]
    ZeroProbe,

    #[error("correlation matrix is indefinite (eigenvalue {0:.3e})")]
    IndefiniteCorrelation(f64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("Gram matrix is numerically singular (condition number {0:.3e})")]
    SingularGram(f64),

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("bisection did not converge within {0} iterations")]
    NoConvergence(usize),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
