use serde::{Deserialize, Serialize};

use super::bounds::{density_bracket, max_density, TcBounds};
use crate::channel::LinkConfig;
use crate::error::{invalid, Result};
use crate::geom_proc::MacProcess;
use crate::numeric::bisect_predicate;
use crate::outage_sim::{estimate_ps, truncation_radius, OutageEstimate, Scenario};
use crate::scalar::Scalar;

fn check_epsilon<T: Scalar>(epsilon: T) -> Result<()> {
    if !(epsilon > T::zero() && epsilon < T::one()) {
        return Err(invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

/// TC(ε) ≈ (ε/γ)^{1/κ} (1 − ε).
pub fn tc_asymptotic<T: Scalar>(gamma: T, kappa: T, epsilon: T) -> Result<T> {
    check_epsilon(epsilon)?;
    if !(gamma > T::zero() && gamma.is_finite()) {
        return Err(invalid("gamma", format!("must be positive, got {gamma}")));
    }
    if !(kappa > T::zero() && kappa.is_finite()) {
        return Err(invalid("kappa", format!("must be positive, got {kappa}")));
    }
    Ok((epsilon / gamma).powf(kappa.recip()) * (T::one() - epsilon))
}

/// Monte Carlo budget for [`tc_simulated`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcSimOptions {
    /// Replications per success-probability evaluation.
    pub samples: u64,
    pub seed: u64,
    /// Bisection stops once the density bracket is narrower than `rel_tol`·η.
    pub rel_tol: f64,
    /// Truncation bias allowed per evaluation, as a multiple of the binomial
    /// standard error √(ε(1 − ε)/samples).
    pub truncation_se_fraction: f64,
    /// Width of the reported interval in standard errors.
    pub z: f64,
}

impl Default for TcSimOptions {
    fn default() -> Self {
        Self {
            samples: 100_000,
            seed: 0,
            rel_tol: 1e-3,
            truncation_se_fraction: 0.2,
            z: 3.0,
        }
    }
}

/// Simulated transmission capacity with an interval reflecting estimator noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcSimulated {
    pub epsilon: f64,
    /// (1 − ε) η*.
    pub tc: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub eta_star: f64,
    /// Estimate at the final density.
    pub estimate: OutageEstimate,
    /// Local slope dP_s/dη from coupled evaluations at 0.9η* and 1.1η*.
    pub slope: f64,
    pub evaluations: usize,
}

/// Solves P̂_s(η) = 1 − ε over the density family of `family` by bisection.
///
/// Every evaluation reuses `opts.seed`, so the estimates along the bisection
/// path are coupled and the comparison with 1 − ε is close to monotone. The
/// interval adds z·SE/|slope| to the final bracket.
pub fn tc_simulated(epsilon: f64, family: &MacProcess, link: &LinkConfig, opts: &TcSimOptions) -> Result<TcSimulated> {
    check_epsilon(epsilon)?;
    family.validate()?;
    link.validate()?;
    if !(opts.rel_tol > 0.0 && opts.z >= 0.0 && opts.truncation_se_fraction > 0.0 && opts.samples > 0) {
        return Err(invalid("tc options", "rel_tol and truncation_se_fraction must be positive, samples non-zero"));
    }
    let target = 1.0 - epsilon;
    let tol = opts.truncation_se_fraction * (epsilon * (1.0 - epsilon) / opts.samples as f64).sqrt();
    let mut evaluations = 0;
    let mut eval = |eta: f64| -> Result<OutageEstimate> {
        let process = family.with_density(eta)?;
        let radius = truncation_radius(&process, link, tol)?;
        evaluations += 1;
        estimate_ps(&Scenario::new(process, *link, radius, opts.samples, opts.seed)?)
    };
    // a first-order guess from the mean interference
    let guess = {
        let probe = family.with_density(max_density(family) * 1e-3)?;
        let p = eval(probe.density())?;
        let loss = link.noise_only_success()? - p.p_success;
        let allowed = link.noise_only_success()? - target;
        if loss > 0.0 && allowed > 0.0 {
            probe.density() * allowed / loss
        } else {
            probe.density()
        }
    };
    let max_eta = max_density(family);
    let (lo, hi) = density_bracket(|eta| Ok(eval(eta)?.p_success >= target), guess, max_eta)?;
    let b = bisect_predicate(|eta| Ok(eval(eta)?.p_success >= target), lo, hi, opts.rel_tol * lo)?;
    let eta_star = b.midpoint();
    let estimate = eval(eta_star)?;
    let lo_est = eval(0.9 * eta_star)?;
    let hi_est = eval((1.1 * eta_star).min(max_eta))?;
    let span = (1.1 * eta_star).min(max_eta) - 0.9 * eta_star;
    let slope = (hi_est.p_success - lo_est.p_success) / span;
    let half = opts.z * estimate.std_error / slope.abs() + b.half_width();
    let scale = 1.0 - epsilon;
    Ok(TcSimulated {
        epsilon,
        tc: scale * eta_star,
        ci_low: scale * (eta_star - half).max(0.0),
        ci_high: scale * (eta_star + half),
        eta_star,
        estimate,
        slope,
        evaluations,
    })
}

/// Transmission capacity across an ε grid from the asymptotic formula and,
/// when computed, simulation and the TCL/TCU bounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TcCurve {
    pub epsilons: Vec<f64>,
    pub tc_asymptotic: Vec<f64>,
    pub tc_simulated: Option<Vec<TcSimulated>>,
    pub tcl: Option<Vec<f64>>,
    pub tcu: Option<Vec<f64>>,
}

impl TcCurve {
    pub fn asymptotic(epsilons: &[f64], gamma: f64, kappa: f64) -> Result<Self> {
        if epsilons.is_empty() {
            return Err(crate::error::Error::Empty("epsilon grid"));
        }
        let tc = epsilons
            .iter()
            .map(|&e| tc_asymptotic(gamma, kappa, e))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            epsilons: epsilons.to_vec(),
            tc_asymptotic: tc,
            tc_simulated: None,
            tcl: None,
            tcu: None,
        })
    }

    pub fn with_bounds(mut self, bounds: &[TcBounds]) -> Self {
        self.tcl = Some(bounds.iter().map(|b| b.tcl).collect());
        self.tcu = Some(bounds.iter().map(|b| b.tcu).collect());
        self
    }

    pub fn with_simulated(mut self, sims: Vec<TcSimulated>) -> Self {
        self.tc_simulated = Some(sims);
        self
    }

    /// Whether TCL ≤ TC_sim ≤ TCU holds at every ε where all are present,
    /// allowing the simulated interval.
    pub fn ordering_holds(&self) -> bool {
        let n = self.epsilons.len();
        (0..n).all(|i| {
            let lo = self.tcl.as_ref().map(|v| v[i]);
            let hi = self.tcu.as_ref().map(|v| v[i]);
            if let (Some(l), Some(u)) = (lo, hi) {
                if l > u {
                    return false;
                }
            }
            match &self.tc_simulated {
                Some(s) => lo.is_none_or(|l| l <= s[i].ci_high) && hi.is_none_or(|u| s[i].ci_low <= u),
                None => true,
            }
        })
    }
}
