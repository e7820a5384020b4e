use serde::{Deserialize, Serialize};

use crate::asymptotics::{analytic_settings, kernel_knee};
use crate::channel::{FadingModel, LinkConfig};
use crate::error::{Error, Result};
use crate::geom_proc::{MacProcess, Point, ProductDensityModel};
use crate::numeric::Estimate;
use crate::outage_sim::{pair_integral_is, palm_mc, pcf_weighted_integral, truncation_radius, Envelope};
use crate::scalar::Scalar;

/// Relative accuracy of the μ_η tail dropped when σ_η or 𝒢 is simulated.
pub const FUNCTIONAL_TRUNCATION_REL: f64 = 1e-3;

/// How σ_η was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaMethod {
    /// σ_η = μ_η² (Poisson).
    Factorized,
    /// Importance sampling against the exact third-order product density.
    ImportanceSampling,
    /// Palm simulation of Σ_{x≠y} Δ(x)Δ(y).
    PalmMonteCarlo,
}

/// First- and second-order interference functionals at density η.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MuSigma {
    pub eta: f64,
    /// μ_η = E[Σ Δ(x)].
    pub mu_eta: f64,
    /// σ_η = E[Σ_{x≠y} Δ(x)Δ(y)].
    pub sigma_eta: f64,
    pub sigma_std_error: f64,
    pub sigma_method: SigmaMethod,
    /// E[Σ Δ(x)²], the numerator of the C.1 ratio.
    pub delta_sq_eta: f64,
}

pub(crate) fn require_rayleigh_signal<T: Scalar>(link: &LinkConfig<T>) -> Result<()> {
    link.validate()?;
    if link.sd_fading != FadingModel::Rayleigh {
        return Err(Error::Unsupported(
            "interference functionals and their bounds need an exponential signal gain".into(),
        ));
    }
    Ok(())
}

/// Δ as a function of the distance to the receiver.
pub(crate) fn delta_at<T: Scalar>(link: &LinkConfig<T>, d2: T) -> T {
    let s = link.interference_scale() * link.pathloss.from_dist_sq(d2);
    if s.is_infinite() {
        T::one()
    } else {
        link.interferer_fading.one_minus_laplace(s)
    }
}

/// η ∫ g(x) f(Δ(x)) dx.
fn delta_functional<T, F>(model: &ProductDensityModel<T>, link: &LinkConfig<T>, f: F) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let eta = model.density();
    if eta == T::zero() {
        return Ok(T::zero());
    }
    let breaks: Vec<T> = kernel_knee(link).into_iter().collect();
    let v = pcf_weighted_integral(model, link.distance, |d: T| f(delta_at(link, d * d)), &breaks, None, analytic_settings())?;
    Ok(eta * v)
}

/// μ_η = η⁻¹ ∫ ρ⁽²⁾(x) Δ(x) dx by quadrature.
pub fn mu_eta<T: Scalar>(model: &ProductDensityModel<T>, link: &LinkConfig<T>) -> Result<T> {
    require_rayleigh_signal(link)?;
    delta_functional(model, link, |d| d)
}

/// η⁻¹ ∫ ρ⁽²⁾(x) Δ(x)² dx.
pub fn delta_sq_eta<T: Scalar>(model: &ProductDensityModel<T>, link: &LinkConfig<T>) -> Result<T> {
    require_rayleigh_signal(link)?;
    delta_functional(model, link, |d| d * d)
}

/// 𝒢[e^{−Δ}] for a Poisson transmitter set: exp(−η ∫ (1 − e^{−Δ})).
pub fn pgfl_poisson<T: Scalar>(eta: T, link: &LinkConfig<T>) -> Result<T> {
    require_rayleigh_signal(link)?;
    let model = ProductDensityModel::PppConstant { density: eta };
    let v = delta_functional(&model, link, |d| -(-d).exp_m1())?;
    Ok((-v).exp())
}

/// Radius beyond which the dropped part of μ_η is below
/// [`FUNCTIONAL_TRUNCATION_REL`]·μ_η.
pub(crate) fn functional_radius(process: &MacProcess, link: &LinkConfig, mu: f64) -> Result<f64> {
    // with an exponential signal the truncation bias bound is exactly a bound
    // on the tail of μ_η
    truncation_radius(process, link, (FUNCTIONAL_TRUNCATION_REL * mu).max(f64::MIN_POSITIVE))
}

/// μ_η, σ_η and E[ΣΔ²] for a transmitter process under an exponential signal
/// gain.
///
/// σ_η is μ_η² for Poisson, importance-sampled with `samples` pairs for Matérn
/// and simulated with `samples` Palm replications for cluster processes.
pub fn mu_sigma(process: &MacProcess, link: &LinkConfig, samples: u64, seed: u64) -> Result<MuSigma> {
    require_rayleigh_signal(link)?;
    process.validate()?;
    let eta = process.density();
    let model = process.product_density();
    let mu = mu_eta(&model, link)?;
    let delta_sq = delta_sq_eta(&model, link)?;
    let (sigma, method) = match process {
        MacProcess::PppAloha { .. } => (Estimate::exact(mu * mu), SigmaMethod::Factorized),
        MacProcess::MaternCsma(spec) => {
            let rx = link.receiver();
            let alpha = link.pathloss.alpha();
            let d0 = (link.interference_scale() * link.interferer_fading.mean()).powf(1.0 / alpha);
            let env = Envelope::for_kernel(rx, d0, alpha, spec.exclusion_radius)?;
            let w = |x: &Point, y: &Point| match spec.product_density(&[*x, *y]) {
                Ok(0.0) => 0.0,
                Ok(rho) => rho * delta_at(link, x.dist_sq(&rx)) * delta_at(link, y.dist_sq(&rx)),
                Err(_) => f64::NAN,
            };
            let est = pair_integral_is(w, &env, samples, seed)?;
            if !est.value.is_finite() {
                return Err(Error::Numeric("third-order Matérn product density failed".into()));
            }
            (est.scale(1.0 / eta), SigmaMethod::ImportanceSampling)
        }
        MacProcess::ThomasAloha { .. } | MacProcess::ClusterMac { .. } => {
            let radius = functional_radius(process, link, mu)?;
            let rx = link.receiver();
            let out = palm_mc(process, link, radius, samples, seed, |pts, _| {
                let (mut s, mut s2) = (0.0, 0.0);
                for p in pts {
                    let d = delta_at(link, p.dist_sq(&rx));
                    s += d;
                    s2 += d * d;
                }
                s * s - s2
            })?;
            (out.stats.estimate(), SigmaMethod::PalmMonteCarlo)
        }
    };
    Ok(MuSigma {
        eta,
        mu_eta: mu,
        sigma_eta: sigma.value.max(0.0),
        sigma_std_error: sigma.std_error,
        sigma_method: method,
        delta_sq_eta: delta_sq,
    })
}
