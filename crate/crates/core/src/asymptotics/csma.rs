use super::aloha::analytic_settings;
use super::noise::noise_taylor;
use super::partitions::partitions;
use super::result::{AsymptoticMethod, AsymptoticResult};
use crate::channel::{FadingModel, LinkConfig};
use crate::error::{invalid, Error, Result};
use crate::geom_proc::{matern_scaled_product_density, matern_scaled_rho2, Point};
use crate::numeric::{integrate, Estimate};
use crate::outage_sim::{pair_integral_is, Envelope};
use crate::scalar::Scalar;

/// Highest diversity order handled by the CSMA partition sum.
pub const CSMA_MAX_NU: u32 = 2;

/// ∫ ρ̃⁽²⁾(x) ‖x‖^{−β} dx = 2π [∫₁² ρ̃⁽²⁾(r) r^{1−β} dr + 2^{2−β}/(π²(β − 2))].
fn scaled_pair_integral<T: Scalar>(beta: T) -> Result<T> {
    let two = T::lit(2.0);
    let near = integrate(
        |r: T| matern_scaled_rho2(r) * r.powf(T::one() - beta),
        T::one(),
        two,
        analytic_settings(),
    )?;
    let far = two.powf(two - beta) / (T::PI() * T::PI() * (beta - two));
    Ok(two * T::PI() * (near.value + far))
}

fn check_alpha<T: Scalar>(alpha: T) -> Result<()> {
    if !(alpha > T::lit(2.0) && alpha.is_finite()) {
        return Err(invalid("alpha", format!("must exceed 2, got {alpha}")));
    }
    Ok(())
}

/// A_I for ν = 1: E[h] ∫ ρ̃⁽²⁾(x) ‖x‖^{−α} dx.
pub fn csma_a_i_first_order<T: Scalar>(alpha: T, interferer_fading: &FadingModel<T>) -> Result<T> {
    check_alpha(alpha)?;
    interferer_fading.validate()?;
    Ok(interferer_fading.mean() * scaled_pair_integral(alpha)?)
}

/// A_I = Σ over partitions (p₁, …, p_k) of ν of
/// ∫ ρ̃⁽ᵏ⁺¹⁾(x₁, …, x_k) ∏ ‖xᵢ‖^{−αpᵢ} E[h^{pᵢ}] dx.
///
/// Single-point terms are computed by quadrature; the (1, 1) term is
/// importance-sampled with `samples` pairs.
pub fn csma_a_i(nu: u32, alpha: f64, interferer_fading: &FadingModel, samples: u64, seed: u64) -> Result<Estimate> {
    check_alpha(alpha)?;
    interferer_fading.validate()?;
    if !(1..=CSMA_MAX_NU).contains(&nu) {
        return Err(Error::Unsupported(format!(
            "CSMA partition sums for ν = {nu}; supported up to ν = {CSMA_MAX_NU}"
        )));
    }
    let h = interferer_fading;
    let mut total = Estimate::exact(0.0);
    for part in partitions(nu)? {
        let term = match part.parts.as_slice() {
            [p] => Estimate::exact(h.moment(*p) * scaled_pair_integral(alpha * *p as f64)?),
            [1, 1] => {
                // Pareto(1, α) proposal: ‖x‖^{−α}/q(x) = 2π/(α − 2)
                let env = Envelope::Pareto {
                    center: Point::origin(),
                    d_min: 1.0,
                    alpha,
                };
                let z = 2.0 * std::f64::consts::PI / (alpha - 2.0);
                let w = |x: &Point, y: &Point| {
                    let rho = matern_scaled_product_density(3, &[*x, *y]).unwrap_or(f64::NAN);
                    if rho == 0.0 {
                        0.0
                    } else {
                        rho * env.pdf(x) * env.pdf(y) * z * z
                    }
                };
                pair_integral_is(w, &env, samples, seed)?.scale(h.mean() * h.mean())
            }
            other => {
                return Err(Error::Unsupported(format!("partition {other:?}")));
            }
        };
        total = total.add(term);
    }
    Ok(total)
}

/// Closed-form CSMA γ for Rayleigh signal and interferers:
/// R^α θ π^{α/2} 2^{3−α}/(α − 2) + 4θR^α π² ∫_{1/√π}^{2/√π} r^{1−α}/g(r) dr with
/// g(r) = 2π − 2 arccos(√π r/2) + (√π r/2)√(4 − πr²).
pub fn gamma_csma_rayleigh_closed<T: Scalar>(theta: T, alpha: T, r: T) -> Result<T> {
    check_alpha(alpha)?;
    if !(theta > T::zero() && r > T::zero()) {
        return Err(invalid("theta", "θ and R must be positive"));
    }
    let pi = T::PI();
    let two = T::lit(2.0);
    let sp = pi.sqrt();
    let g = |u: T| {
        let h = sp * u / two;
        two * pi - two * h.min(T::one()).acos() + h * (T::lit(4.0) - pi * u * u).max(T::zero()).sqrt()
    };
    let q = integrate(|u: T| u.powf(T::one() - alpha) / g(u), T::one() / sp, two / sp, analytic_settings())?;
    let ra = r.powf(alpha);
    Ok(ra * theta * pi.powf(alpha / two) * two.powf(T::lit(3.0) - alpha) / (alpha - two)
        + T::lit(4.0) * theta * ra * pi * pi * q.value)
}

/// (γ, κ) for Matérn CSMA: κ = αν/2 and
/// γ = c₀ π^{1+αν/2} (θ/ℓ(R))^ν A_I, with (ν, c₀) from [`noise_taylor`].
pub fn gamma_kappa_csma(link: &LinkConfig, samples: u64, seed: u64) -> Result<AsymptoticResult> {
    link.validate()?;
    let (nu, c0) = noise_taylor(&link.sd_fading, link.noise)?;
    let alpha = link.pathloss.alpha();
    let a_i = csma_a_i(nu, alpha, &link.interferer_fading, samples, seed)?;
    let nu_f = nu as f64;
    let front = c0 * std::f64::consts::PI.powf(1.0 + alpha * nu_f / 2.0) * link.interference_scale().powi(nu as i32);
    let gamma = a_i.scale(front);
    Ok(AsymptoticResult {
        gamma: gamma.value,
        kappa: alpha * nu_f / 2.0,
        method: AsymptoticMethod::AnalyticCsma,
        stderr: (gamma.std_error > 0.0).then_some(gamma.std_error),
        kappa_stderr: None,
        fit: None,
    })
}
