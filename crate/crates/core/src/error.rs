use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A rate region is missing a bound on one of the two rate axes.
    #[error("unbounded region: {0}")]
    Unbounded(String),

    /// Adaptive quadrature hit its evaluation cap before reaching tolerance.
    #[error(
        "quadrature did not converge after {evaluations} evaluations \
         (partial value {partial}, error estimate {err_estimate:e})"
    )]
    NonConvergence {
        partial: f64,
        err_estimate: f64,
        evaluations: usize,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
