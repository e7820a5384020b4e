use crate::channel::LinkConfig;
use crate::error::{Error, Result};
use crate::geom_proc::{MacProcess, MAX_EXPECTED_POINTS};
use crate::numeric::bisect_predicate;

/// Smallest admissible truncation radius, in units of the link distance.
pub const TRUNCATION_FLOOR_FACTOR: f64 = 10.0;

/// Lipschitz bound on |P_s − P_s(truncated)| when interferers farther than
/// `radius` from the receiver are dropped:
///
/// L · θ/ℓ(R) · E[h] · η⁻¹ · sup_{‖x‖ ≥ radius − R} ρ⁽²⁾(x) · 2π ∫_radius^∞ r ℓ(r) dr.
pub fn truncation_bias_bound(process: &MacProcess, link: &LinkConfig, radius: f64) -> Result<f64> {
    let eta = process.density();
    if eta == 0.0 {
        return Ok(0.0);
    }
    let rho = process.product_density().sup_rho2_beyond(radius - link.distance);
    if rho == 0.0 {
        return Ok(0.0);
    }
    let tail = link.pathloss.radial_tail(radius)?;
    let l = link.sd_fading.lipschitz();
    Ok(l * link.interference_scale() * link.interferer_fading.mean() * rho * 2.0 * std::f64::consts::PI * tail / eta)
}

/// Smallest radius (at least 10R) whose truncation bias bound is below `tol`.
pub fn truncation_radius(process: &MacProcess, link: &LinkConfig, tol: f64) -> Result<f64> {
    link.validate()?;
    if !(tol > 0.0) {
        return Err(crate::error::invalid("tol", format!("must be positive, got {tol}")));
    }
    let floor = TRUNCATION_FLOOR_FACTOR * link.distance;
    let above = |r: f64| truncation_bias_bound(process, link, r).map(|b| b > tol);
    if !above(floor)? {
        return Ok(floor);
    }
    let eta = process.density();
    let affordable = |r: f64| eta * std::f64::consts::PI * r * r <= MAX_EXPECTED_POINTS;
    let mut hi = 2.0 * floor;
    while above(hi)? {
        if !affordable(hi) || !hi.is_finite() {
            return Err(Error::ToleranceUnreachable { tol, required: hi });
        }
        hi *= 2.0;
    }
    let b = bisect_predicate(above, hi / 2.0, hi, hi * 1e-9)?;
    if !affordable(b.hi) {
        return Err(Error::ToleranceUnreachable { tol, required: b.hi });
    }
    Ok(b.hi)
}
