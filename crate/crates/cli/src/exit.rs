use std::fmt;

/// Schema or value problem in the experiment config.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

/// A reference-suite comparison outside its tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceExceeded(pub Vec<String>);

impl fmt::Display for ToleranceExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} comparison(s) outside tolerance: {}", self.0.len(), self.0.join("; "))
    }
}

impl std::error::Error for ToleranceExceeded {}

pub const OK: u8 = 0;
pub const OTHER: u8 = 1;
pub const CONFIG: u8 = 2;
pub const NUMERIC: u8 = 3;
pub const BUDGET: u8 = 4;

/// Maps an error chain to the process exit code.
pub fn code_for(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<ConfigError>() {
            return CONFIG;
        }
        if cause.is::<ToleranceExceeded>() {
            return NUMERIC;
        }
        if let Some(e) = cause.downcast_ref::<sirasym::Error>() {
            use sirasym::Error::*;
            return match e {
                InvalidParameter { .. } | DegenerateWindow(_) | Unsupported(_) | Empty(_) => CONFIG,
                RejectionCapExceeded { .. } | PointCapExceeded { .. } | ToleranceUnreachable { .. } => BUDGET,
                QuadratureNonConvergence { .. } | NotBracketed { .. } | Divergent(_) | SingularPathLoss | Numeric(_) => {
                    NUMERIC
                }
            };
        }
    }
    OTHER
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_core_errors() {
        let e = anyhow::Error::new(sirasym::Error::PointCapExceeded { expected: 1e9, cap: 10 });
        assert_eq!(code_for(&e), BUDGET);
        let e = anyhow::Error::new(sirasym::Error::Numeric("x".into())).context("while running");
        assert_eq!(code_for(&e), NUMERIC);
        assert_eq!(code_for(&anyhow::Error::new(ConfigError("x".into()))), CONFIG);
        assert_eq!(code_for(&anyhow::anyhow!("io")), OTHER);
    }
}
