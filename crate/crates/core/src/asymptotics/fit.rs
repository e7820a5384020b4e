use serde::{Deserialize, Serialize};

use super::result::{AsymptoticMethod, AsymptoticResult};
use crate::error::{invalid, Error, Result};
use crate::outage_sim::OutageEstimate;

/// Lower edge of the fit window, in standard errors of 1 − p̂.
pub const FIT_MIN_SE_MULTIPLE: f64 = 5.0;
/// Upper edge of the fit window on 1 − p̂.
pub const FIT_MAX_OUTAGE: f64 = 0.2;

const FIT_MIN_POINTS: usize = 4;

/// Regression details of a (γ̂, κ̂) fit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitDiagnostics {
    /// Indices of the sweep points used.
    pub used: Vec<usize>,
    pub log_gamma: f64,
    pub log_gamma_stderr: f64,
    /// Covariance of (κ̂, log γ̂).
    pub covariance: f64,
    pub chi_square: f64,
    pub dof: usize,
    pub weighted: bool,
}

/// Weighted least squares of log(1 − p̂) on log η; slope κ̂, intercept log γ̂.
///
/// Weights are inverse delta-method variances (se/(1 − p̂))². When every
/// standard error is zero the fit is unweighted. Reported standard errors are
/// scaled by √max(1, χ²/dof), so curvature left in the window widens them.
pub fn fit_gamma_kappa(etas: &[f64], ps: &[OutageEstimate]) -> Result<AsymptoticResult> {
    if etas.len() != ps.len() {
        return Err(invalid("ps", "one estimate per density is required"));
    }
    let used: Vec<usize> = (0..etas.len())
        .filter(|&i| {
            let q = 1.0 - ps[i].p_success;
            etas[i] > 0.0 && q > 0.0 && q >= FIT_MIN_SE_MULTIPLE * ps[i].std_error && q <= FIT_MAX_OUTAGE
        })
        .collect();
    if used.len() < FIT_MIN_POINTS {
        if etas.iter().zip(ps).any(|(_, p)| p.p_success >= 1.0) {
            return Err(Error::Numeric(
                "non-positive outage in the sweep: densities too small for the sample budget".into(),
            ));
        }
        return Err(invalid(
            "etas",
            format!(
                "{} of {} points fall in the fit window; need {FIT_MIN_POINTS}",
                used.len(),
                etas.len()
            ),
        ));
    }
    let weighted = used.iter().any(|&i| ps[i].std_error > 0.0);
    if weighted && used.iter().any(|&i| ps[i].std_error == 0.0) {
        return Err(invalid("ps", "standard errors must be all zero or all positive"));
    }
    let (mut sw, mut sx, mut sy, mut sxx, mut sxy) = (0.0, 0.0, 0.0, 0.0, 0.0);
    let pts: Vec<(f64, f64, f64)> = used
        .iter()
        .map(|&i| {
            let q = 1.0 - ps[i].p_success;
            let w = if weighted { (q / ps[i].std_error).powi(2) } else { 1.0 };
            (etas[i].ln(), q.ln(), w)
        })
        .collect();
    for &(x, y, w) in &pts {
        sw += w;
        sx += w * x;
        sy += w * y;
        sxx += w * x * x;
        sxy += w * x * y;
    }
    let det = sw * sxx - sx * sx;
    if !(det > 0.0) {
        return Err(Error::Numeric("degenerate density grid".into()));
    }
    let slope = (sw * sxy - sx * sy) / det;
    let intercept = (sxx * sy - sx * sxy) / det;
    let chi_square: f64 = pts
        .iter()
        .map(|&(x, y, w)| w * (y - intercept - slope * x).powi(2))
        .sum();
    let dof = pts.len() - 2;
    // known variances give (XᵀWX)⁻¹, widened when the line misfits the data
    // (χ²/dof > 1); unweighted fits use the residual scale
    let reduced = chi_square / dof as f64;
    let scale = if weighted { reduced.max(1.0) } else { reduced };
    let var_slope = scale * sw / det;
    let var_intercept = scale * sxx / det;
    let cov = -scale * sx / det;
    let gamma = intercept.exp();
    Ok(AsymptoticResult {
        gamma,
        kappa: slope,
        method: AsymptoticMethod::RegressionFit,
        stderr: Some(gamma * var_intercept.sqrt()),
        kappa_stderr: Some(var_slope.sqrt()),
        fit: Some(FitDiagnostics {
            used,
            log_gamma: intercept,
            log_gamma_stderr: var_intercept.sqrt(),
            covariance: cov,
            chi_square,
            dof,
            weighted,
        }),
    })
}

/// Position of a fitted κ̂ relative to the admissible range [1, αν/2].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaCheck {
    pub kappa: f64,
    pub lower: f64,
    pub upper: f64,
    /// Slack added on both sides (twice the fit standard error).
    pub tolerance: f64,
    pub within: bool,
    pub at_lower: bool,
    pub at_upper: bool,
}

/// Flags κ̂ outside [1 − tol, αν/2 + tol] with tol = 2·`kappa_stderr`.
pub fn kappa_bounds_check(alpha: f64, nu: u32, kappa_hat: f64, kappa_stderr: f64) -> KappaCheck {
    let lower = 1.0;
    let upper = alpha * nu as f64 / 2.0;
    let tolerance = 2.0 * kappa_stderr.max(0.0);
    KappaCheck {
        kappa: kappa_hat,
        lower,
        upper,
        tolerance,
        within: kappa_hat >= lower - tolerance && kappa_hat <= upper + tolerance,
        at_lower: (kappa_hat - lower).abs() <= tolerance,
        at_upper: (kappa_hat - upper).abs() <= tolerance,
    }
}
