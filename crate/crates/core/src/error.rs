use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A hypergeometric parameter set has no non-positive integer upper
    /// parameter, so the series does not terminate.
    #[error("non-terminating series: {0}")]
    NonTerminating(String),

    /// A lower hypergeometric parameter hits a pole inside the summation range.
    #[error("pole in lower parameter {param} at order {order}")]
    Pole { param: f64, order: usize },

    #[error("no root: {0}")]
    NoRoot(String),

    #[error("rank-deficient least-squares system: {0}")]
    RankDeficient(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    /// Adaptive quadrature ran out of subdivisions. Carries the best estimate.
    #[error("quadrature did not converge after {subdivisions} subdivisions (value {value:e}, error estimate {error:e})")]
    NonConvergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("invalid reference data: {0}")]
    Data(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
