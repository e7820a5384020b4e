use std::cell::RefCell;

use super::result::{AsymptoticMethod, AsymptoticResult};
use crate::channel::LinkConfig;
use crate::error::{invalid, Error, Result};
use crate::geom_proc::ProductDensityModel;
use crate::numeric::{ln_gamma, QuadSettings};
use crate::outage_sim::pcf_weighted_integral;
use crate::scalar::Scalar;

pub(crate) fn analytic_settings<T: Scalar>() -> QuadSettings<T> {
    let rel = T::lit(1e-10).max(T::epsilon() * T::lit(100.0));
    QuadSettings::new(T::min_positive_value(), rel).with_max_subdivisions(4000)
}

/// Distance at which the normalized interference θℓ(d)/ℓ(R) equals one.
pub(crate) fn kernel_knee<T: Scalar>(link: &LinkConfig<T>) -> Option<T> {
    link.pathloss.inverse(link.signal_pathloss() / link.theta).ok()
}

/// γ for ALOHA on a base process with pair correlation g:
/// γ = ∫ g(x) [F(N) − E_h F(hθℓ(x − r)/ℓ(R) + N)] dx, κ = 1.
///
/// Without noise the bracket is the single-interferer outage; with noise it
/// is the outage in excess of the noise-only outage, matching the absolute
/// convention P_s ∼ F(N) − γη.
pub fn gamma_aloha<T: Scalar>(model: &ProductDensityModel<T>, link: &LinkConfig<T>) -> Result<AsymptoticResult<T>> {
    link.validate()?;
    let err = RefCell::new(None);
    let pl = link.pathloss;
    let scale = link.interference_scale();
    let kernel = |d: T| match link.excess_outage(scale * pl.from_dist_sq(d * d)) {
        Ok(v) => v,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            T::zero()
        }
    };
    let breaks: Vec<T> = kernel_knee(link).into_iter().collect();
    let gamma = pcf_weighted_integral(model, link.distance, kernel, &breaks, None, analytic_settings())?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    Ok(AsymptoticResult::exact(gamma, T::one(), AsymptoticMethod::AnalyticAloha))
}

fn check_geometry<T: Scalar>(theta: T, alpha: T, r: T) -> Result<()> {
    if !(theta > T::zero() && theta.is_finite()) {
        return Err(invalid("theta", format!("must be positive, got {theta}")));
    }
    if !(alpha > T::lit(2.0) && alpha.is_finite()) {
        return Err(invalid("alpha", format!("must exceed 2, got {alpha}")));
    }
    if !(r > T::zero() && r.is_finite()) {
        return Err(invalid("R", format!("must be positive, got {r}")));
    }
    Ok(())
}

/// Poisson ALOHA with Nakagami-m signal and interferer gains under ℓ = r^{−α}:
/// πθ^{2/α}R² Γ(m − 2/α)Γ(m + 2/α)/Γ(m)².
pub fn gamma_aloha_nakagami<T: Scalar>(m: T, theta: T, alpha: T, r: T) -> Result<T> {
    check_geometry(theta, alpha, r)?;
    let d = T::lit(2.0) / alpha;
    if !(m > d && m.is_finite()) {
        return Err(invalid("m", format!("must exceed 2/α = {d}, got {m}")));
    }
    let ratio = (ln_gamma(m - d) + ln_gamma(m + d) - T::lit(2.0) * ln_gamma(m)).exp();
    Ok(T::PI() * theta.powf(d) * r * r * ratio)
}

/// Poisson ALOHA with M-antenna maximum-ratio combining and Rayleigh
/// interferers under ℓ = r^{−α}: πθ^{2/α}R² Γ(M − 2/α)Γ(1 + 2/α)/Γ(M).
pub fn gamma_aloha_beamforming<T: Scalar>(antennas: u32, theta: T, alpha: T, r: T) -> Result<T> {
    check_geometry(theta, alpha, r)?;
    if antennas == 0 {
        return Err(Error::InvalidParameter {
            name: "antennas",
            reason: "need at least one antenna".into(),
        });
    }
    let d = T::lit(2.0) / alpha;
    let m = T::count(antennas as usize);
    let ratio = (ln_gamma(m - d) + ln_gamma(T::one() + d) - ln_gamma(m)).exp();
    Ok(T::PI() * theta.powf(d) * r * r * ratio)
}
