use thiserror::Error;

/// Errors reported by the engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {error:e} after {evaluations} evaluations"
    )]
    QuadratureNonConvergence {
        estimate: f64,
        error: f64,
        evaluations: usize,
    },

    #[error("root not bracketed on [{lo:e}, {hi:e}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("rejection sampling exceeded {cap} attempts")]
    RejectionCapExceeded { cap: u64 },

    #[error("expected point count {expected:.0} exceeds the cap of {cap}")]
    PointCapExceeded { expected: f64, cap: usize },

    #[error("divergent configuration: {0}")]
    Divergent(String),

    #[error("tolerance {tol:e} unreachable: requires truncation radius {required:e}")]
    ToleranceUnreachable { tol: f64, required: f64 },

    #[error("singular path loss: interferer coincides with the receiver")]
    SingularPathLoss,

    #[error("internal numeric error: {0}")]
    Numeric(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
