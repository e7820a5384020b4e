use serde::{Deserialize, Serialize};

use super::functionals::{functional_radius, mu_eta, mu_sigma, pgfl_poisson, require_rayleigh_signal, delta_at, MuSigma};
use crate::channel::LinkConfig;
use crate::error::{invalid, Error, Result};
use crate::geom_proc::MacProcess;
use crate::numeric::{bisect_predicate, Estimate};
use crate::outage_sim::palm_mc;

/// Lower and upper bounds on the success probability under an exponential
/// signal gain.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuccessBounds {
    pub eta: f64,
    /// e^{−N} max(0, 1 − μ_η).
    pub lower: f64,
    /// e^{−N} (1 − μ_η + σ_η/2).
    pub upper_sigma: f64,
    /// e^{−N} 𝒢[e^{−Δ}], absent when it cannot be the smaller upper bound.
    pub upper_pgfl: Option<Estimate>,
    /// Smaller of the two upper bounds.
    pub upper: f64,
    pub functionals: MuSigma,
}

/// 𝒢[e^{−Δ}] = E[exp(−Σ Δ(x))]: closed form for Poisson, Palm simulation
/// otherwise. Dropping far interferers only raises the product, so the
/// truncated estimate is still an upper bound in expectation.
pub fn pgfl_exp_delta(process: &MacProcess, link: &LinkConfig, mu: f64, samples: u64, seed: u64) -> Result<Estimate> {
    if let MacProcess::PppAloha { .. } = process {
        return Ok(Estimate::exact(pgfl_poisson(process.density(), link)?));
    }
    let radius = functional_radius(process, link, mu)?;
    let rx = link.receiver();
    let out = palm_mc(process, link, radius, samples, seed, |pts, _| {
        (-pts.iter().map(|p| delta_at(link, p.dist_sq(&rx))).sum::<f64>()).exp()
    })?;
    Ok(out.stats.estimate())
}

/// 1 − μ_η ≤ P_s ≤ min{1 − μ_η + σ_η/2, 𝒢[e^{−Δ}]}, all scaled by e^{−N}.
///
/// `samples` and `seed` drive whichever of σ_η and 𝒢 need simulation. Since
/// 𝒢[e^{−Δ}] ≥ e^{−μ_η}, 𝒢 is not simulated when e^{−μ_η} already exceeds the
/// σ bound.
pub fn success_prob_bounds(process: &MacProcess, link: &LinkConfig, samples: u64, seed: u64) -> Result<SuccessBounds> {
    let ms = mu_sigma(process, link, samples, seed)?;
    let noise = (-link.noise).exp();
    let lower = noise * (1.0 - ms.mu_eta).max(0.0);
    let upper_sigma = noise * (1.0 - ms.mu_eta + 0.5 * ms.sigma_eta);
    let skip = !matches!(process, MacProcess::PppAloha { .. }) && (-ms.mu_eta).exp() * noise >= upper_sigma;
    let upper_pgfl = if skip {
        None
    } else {
        let g = pgfl_exp_delta(process, link, ms.mu_eta, samples, seed ^ 0x9e37_79b9_7f4a_7c15)?;
        Some(g.scale(noise))
    };
    Ok(SuccessBounds {
        eta: ms.eta,
        lower,
        upper_sigma,
        upper_pgfl,
        upper: upper_pgfl.map_or(upper_sigma, |g| upper_sigma.min(g.value)),
        functionals: ms,
    })
}

/// Transmission-capacity bounds (TCL, TCU) and the densities they come from.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TcBounds {
    pub epsilon: f64,
    pub tcl: f64,
    pub tcu: f64,
    pub eta_lower: f64,
    pub eta_upper: f64,
}

/// Outage target left for interference once noise has taken its share:
/// e^{−N}(1 − x) ≥ 1 − ε ⟺ x ≤ 1 − (1 − ε)e^{N}.
fn interference_budget(epsilon: f64, noise: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(invalid("epsilon", format!("must lie in (0, 1), got {epsilon}")));
    }
    let b = 1.0 - (1.0 - epsilon) * noise.exp();
    if !(b > 0.0) {
        return Err(invalid("epsilon", format!("noise alone causes outage above {epsilon}")));
    }
    Ok(b)
}

/// Brackets the switch point of a predicate that holds for small densities,
/// starting from `guess` and staying within (0, `max_eta`].
pub(crate) fn density_bracket<P>(mut holds: P, guess: f64, max_eta: f64) -> Result<(f64, f64)>
where
    P: FnMut(f64) -> Result<bool>,
{
    const MIN_ETA: f64 = 1e-12;
    let mut hi = guess.min(max_eta);
    if holds(hi)? {
        let mut lo = hi;
        while lo < max_eta {
            hi = (lo * 2.0).min(max_eta);
            if !holds(hi)? {
                return Ok((lo, hi));
            }
            lo = hi;
        }
        return Err(Error::NotBracketed { lo: guess, hi: max_eta });
    }
    let mut lo = hi;
    while lo > MIN_ETA {
        lo /= 2.0;
        if holds(lo)? {
            return Ok((lo, hi));
        }
        hi = lo;
    }
    Err(Error::NotBracketed { lo: MIN_ETA, hi: guess })
}

/// Largest density a family can reach through its access parameter.
pub(crate) fn max_density(family: &MacProcess) -> f64 {
    match family {
        MacProcess::PppAloha { node_density, .. } => *node_density,
        // a → 0 keeps every parent; stop where a is still resolvable
        MacProcess::MaternCsma(s) => 0.99 * s.parent_density,
        MacProcess::ThomasAloha { cluster, .. } | MacProcess::ClusterMac { cluster, .. } => cluster.density(),
    }
}

/// TCL(ε) = (1 − ε) sup{η : lower bound ≥ 1 − ε} and
/// TCU(ε) = (1 − ε) sup{η : upper bound ≥ 1 − ε} over the density family of
/// `family`. Without noise the lower condition is μ_η ≤ ε.
///
/// Poisson TCL is closed form; everything else is bisected in η to relative
/// width `rel_tol`, with simulated functionals sharing `seed` across η.
pub fn tc_bounds(
    epsilon: f64,
    family: &MacProcess,
    link: &LinkConfig,
    samples: u64,
    seed: u64,
    rel_tol: f64,
) -> Result<TcBounds> {
    require_rayleigh_signal(link)?;
    family.validate()?;
    let budget = interference_budget(epsilon, link.noise)?;
    let max_eta = max_density(family);
    let at = |eta: f64| family.with_density(eta);
    let eta_lower = match family {
        MacProcess::PppAloha { .. } => {
            // μ_η = η μ₁
            let mu1 = mu_eta(&at(max_eta)?.product_density(), link)? / max_eta;
            let e = budget / mu1;
            if e > max_eta {
                return Err(Error::NotBracketed { lo: 0.0, hi: max_eta });
            }
            e
        }
        _ => {
            let holds = |eta: f64| -> Result<bool> { Ok(mu_eta(&at(eta)?.product_density(), link)? <= budget) };
            let (lo, hi) = density_bracket(holds, max_eta * 1e-3, max_eta)?;
            bisect_predicate(holds, lo, hi, rel_tol * lo)?.lo
        }
    };
    let target = 1.0 - epsilon;
    let upper_holds = |eta: f64| -> Result<bool> {
        let b = success_prob_bounds(&at(eta)?, link, samples, seed)?;
        Ok(b.upper >= target)
    };
    let (lo, hi) = density_bracket(upper_holds, eta_lower, max_eta)?;
    let eta_upper = bisect_predicate(upper_holds, lo, hi, rel_tol * lo)?.lo.max(eta_lower);
    Ok(TcBounds {
        epsilon,
        tcl: (1.0 - epsilon) * eta_lower,
        tcu: (1.0 - epsilon) * eta_upper,
        eta_lower,
        eta_upper,
    })
}
