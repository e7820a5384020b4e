use serde::{Deserialize, Serialize};

use super::fit::FitDiagnostics;
use crate::scalar::Scalar;

/// How a (γ, κ) pair was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AsymptoticMethod {
    AnalyticAloha,
    AnalyticCsma,
    ClosedForm,
    RegressionFit,
}

/// Constants of P_s ∼ P₀ − γη^κ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct AsymptoticResult<T = f64> {
    pub gamma: T,
    pub kappa: T,
    pub method: AsymptoticMethod,
    /// Standard error of γ (Monte Carlo or regression), when applicable.
    pub stderr: Option<T>,
    /// Standard error of κ for regression fits.
    pub kappa_stderr: Option<T>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitDiagnostics>,
}

impl<T: Scalar> AsymptoticResult<T> {
    pub fn exact(gamma: T, kappa: T, method: AsymptoticMethod) -> Self {
        Self {
            gamma,
            kappa,
            method,
            stderr: None,
            kappa_stderr: None,
            fit: None,
        }
    }
}
