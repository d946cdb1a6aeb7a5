use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An operation was called outside its documented preconditions.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A point fell outside `[-1, 1]` (beyond the round-off tolerance).
    #[error("x = {0} lies outside [-1, 1]")]
    Domain(f64),

    /// Gegenbauer weights need `lambda > -1/2`.
    #[error("invalid Gegenbauer parameter lambda = {0} (need lambda > -1/2)")]
    InvalidWeight(f64),

    /// The tridiagonal eigen-iteration hit its iteration cap.
    #[error("eigenvalue iteration did not converge within {cap} sweeps (n = {n})")]
    EigenNonConvergence { n: usize, cap: usize },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error("adaptive quadrature did not converge on [{a}, {b}]")]
    QuadratureNonConvergence { a: f64, b: f64 },

    /// An integrand reported a failure.
    #[error("integrand evaluation failed: {0}")]
    Evaluation(String),
}

impl Error {
    pub(crate) fn pre(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    /// True for failures caused by an iteration budget rather than bad input.
    pub fn is_non_convergence(&self) -> bool {
        matches!(
            self,
            Error::EigenNonConvergence { .. } | Error::QuadratureNonConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
