use super::estimator::{palm_mc, Scenario};
use super::integrals::{pair_integral_is, pcf_weighted_integral, Envelope};
use crate::channel::LinkConfig;
use crate::error::{Error, Result};
use crate::geom_proc::{MacProcess, Point};
use crate::numeric::{Estimate, QuadSettings};

/// Highest interference moment estimated by simulation.
pub const MAX_MOMENT_ORDER: u32 = 3;

fn check_finite_moment(process: &MacProcess, link: &LinkConfig) -> Result<()> {
    if link.pathloss.is_bounded() {
        return Ok(());
    }
    match process {
        MacProcess::MaternCsma(s) if s.exclusion_radius > link.distance => Ok(()),
        MacProcess::PppAloha { p, .. } if *p == 0.0 => Ok(()),
        _ => Err(Error::Divergent(
            "interference moments are infinite under unbounded path loss when interferers can \
             approach the receiver; the Taylor expansion of the signal CCDF does not apply"
                .into(),
        )),
    }
}

/// Palm Monte Carlo estimate of E[Iⁿ] over interferers within the scenario's
/// truncation radius.
pub fn interference_moment_mc(scenario: &Scenario, n: u32) -> Result<Estimate> {
    scenario.validate()?;
    if !(1..=MAX_MOMENT_ORDER).contains(&n) {
        return Err(Error::Unsupported(format!("interference moment of order {n}")));
    }
    check_finite_moment(&scenario.process, &scenario.link)?;
    let rx = scenario.link.receiver();
    let pl = scenario.link.pathloss;
    let out = palm_mc(
        &scenario.process,
        &scenario.link,
        scenario.truncation_radius,
        scenario.samples,
        scenario.seed,
        |pts, h| {
            let i: f64 = pts.iter().zip(h).map(|(p, g)| g * pl.from_dist_sq(p.dist_sq(&rx))).sum();
            i.powi(n as i32)
        },
    )?;
    Ok(out.stats.estimate())
}

/// E[Iⁿ] from product densities, over interferers within `truncation` of the
/// receiver (the whole plane when `None`):
///
/// η E[I] = E[h] ∫ ρ⁽²⁾ℓ, η E[I²] = E[h²] ∫ ρ⁽²⁾ℓ² + E[h]² ∫∫ ρ⁽³⁾ℓℓ.
///
/// The double integral is exact for Poisson and importance-sampled with
/// `samples` pairs for Matérn processes.
pub fn interference_moment_analytic(
    process: &MacProcess,
    link: &LinkConfig,
    n: u32,
    truncation: Option<f64>,
    samples: u64,
    seed: u64,
) -> Result<Estimate> {
    link.validate()?;
    check_finite_moment(process, link)?;
    let eta = process.density();
    if eta == 0.0 {
        return Ok(Estimate::exact(0.0));
    }
    let model = process.product_density();
    let pl = link.pathloss;
    let rx = link.receiver();
    let settings = QuadSettings::new(1e-13, 1e-10);
    let single = |power: i32| -> Result<f64> {
        let v = pcf_weighted_integral(
            &model,
            link.distance,
            |d| pl.from_dist_sq(d * d).powi(power),
            &[1.0],
            truncation,
            settings,
        )?;
        Ok(eta * v)
    };
    let h = &link.interferer_fading;
    match n {
        1 => Ok(Estimate::exact(h.mean() * single(1)?)),
        2 => {
            let diag = Estimate::exact(h.moment(2) * single(2)?);
            let cross = match process {
                MacProcess::PppAloha { .. } => Estimate::exact((h.mean() * single(1)?).powi(2)),
                MacProcess::MaternCsma(spec) => {
                    let limit = truncation.unwrap_or(f64::INFINITY);
                    let env = Envelope::for_kernel(rx, 1.0, pl.alpha(), spec.exclusion_radius)?;
                    let w = |x: &Point, y: &Point| {
                        let (dx, dy) = (x.dist_sq(&rx), y.dist_sq(&rx));
                        if dx >= limit * limit || dy >= limit * limit {
                            return 0.0;
                        }
                        let rho = spec.product_density(&[*x, *y]).unwrap_or(f64::NAN);
                        if rho == 0.0 {
                            return 0.0;
                        }
                        rho * pl.from_dist_sq(dx) * pl.from_dist_sq(dy)
                    };
                    pair_integral_is(w, &env, samples, seed)?.scale(h.mean().powi(2) / eta)
                }
                _ => {
                    return Err(Error::Unsupported(
                        "third-order product density of cluster processes".into(),
                    ))
                }
            };
            Ok(diag.add(cross))
        }
        _ => Err(Error::Unsupported(format!("analytic interference moment of order {n}"))),
    }
}
