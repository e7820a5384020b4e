use rand::Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::geom_proc::{Point, ProductDensityModel};
use crate::numeric::{integrate_breaks, integrate_breaks_to_infinity, merge_tree, Estimate, QuadSettings, RunningStats};
use crate::rng::stream_rng;
use crate::scalar::Scalar;

/// ∫_{ℝ²} g(‖x‖) f(‖x − r‖) dx for the pair correlation g of `model` and a
/// radial kernel f about the receiver r = (R, 0), restricted to
/// ‖x − r‖ < `d_max` when given.
///
/// Polar coordinates about the receiver; the angular integral of g is done
/// numerically only where g ≠ 1.
pub fn pcf_weighted_integral<T, F>(
    model: &ProductDensityModel<T>,
    link_distance: T,
    f: F,
    f_breaks: &[T],
    d_max: Option<T>,
    settings: QuadSettings<T>,
) -> Result<T>
where
    T: Scalar,
    F: Fn(T) -> T,
{
    let r = link_distance;
    if !(r > T::zero()) {
        return Err(invalid("R", "link distance must be positive"));
    }
    let two_pi = T::lit(2.0) * T::PI();
    let range = model.correlation_range();
    let near = if range > T::zero() { r + range } else { T::zero() };
    let upper = d_max.unwrap_or(T::infinity());
    let g_breaks = model.breakpoints();
    let inner = QuadSettings {
        abs_tol: settings.abs_tol * T::lit(1e-2),
        rel_tol: settings.rel_tol * T::lit(1e-2),
        ..settings
    }
    .with_max_subdivisions(settings.max_subdivisions);

    let angular = |d: T| -> Result<T> {
        let mut pts = vec![T::zero(), T::PI()];
        for &b in &g_breaks {
            let c = (b * b - r * r - d * d) / (T::lit(2.0) * r * d);
            if c > -T::one() && c < T::one() {
                pts.push(c.acos());
            }
        }
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
        let q = integrate_breaks(
            |psi: T| model.pcf((r * r + d * d + T::lit(2.0) * r * d * psi.cos()).max(T::zero()).sqrt()),
            &pts,
            inner,
        )?;
        Ok(T::lit(2.0) * q.value)
    };

    let mut total = T::zero();
    let near_end = near.min(upper);
    if near_end > T::zero() {
        let mut pts = vec![T::zero(), near_end];
        for &b in &g_breaks {
            pts.push((b - r).abs());
            pts.push(b + r);
        }
        pts.extend_from_slice(f_breaks);
        let pts = clip_sorted(pts, T::zero(), near_end);
        let mut err = None;
        let q = integrate_breaks(
            |d: T| {
                if d <= T::zero() {
                    return T::zero();
                }
                match angular(d) {
                    Ok(g) if g == T::zero() => T::zero(),
                    Ok(g) => d * f(d) * g,
                    Err(e) => {
                        err.get_or_insert(e);
                        T::zero()
                    }
                }
            },
            &pts,
            settings,
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        total += q.value;
    }
    if upper > near {
        let mut pts = vec![near];
        pts.extend(f_breaks.iter().copied().filter(|b| *b > near && *b < upper));
        let pts = clip_sorted(pts, near, upper);
        let kernel = |d: T| two_pi * d * f(d);
        let q = if upper.is_finite() {
            let mut pts = pts;
            pts.push(upper);
            integrate_breaks(kernel, &pts, settings)?
        } else {
            integrate_breaks_to_infinity(kernel, &pts, settings)?
        };
        total += q.value;
    }
    Ok(total)
}

fn clip_sorted<T: Scalar>(mut pts: Vec<T>, lo: T, hi: T) -> Vec<T> {
    pts.retain(|p| *p >= lo && *p <= hi && p.is_finite());
    pts.push(lo);
    if hi.is_finite() {
        pts.push(hi);
    }
    pts.sort_by(|a, b| a.partial_cmp(b).expect("finite"));
    pts.dedup();
    pts
}

/// Importance-sampling proposals for kernels that decay like d^{−α} about a
/// centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Envelope {
    /// Density ∝ d^{−α} on d ≥ `d_min`.
    Pareto { center: Point, d_min: f64, alpha: f64 },
    /// Density ∝ min(1, (d0/d)^α).
    CappedPower { center: Point, d0: f64, alpha: f64 },
}

impl Envelope {
    /// Proposal for a kernel ≈ min(1, (d0/d)^α) about `center` that is only
    /// integrated against a density vanishing inside `B(o, hard_core)`.
    pub fn for_kernel(center: Point, d0: f64, alpha: f64, hard_core: f64) -> Result<Self> {
        let d_min = hard_core - center.norm();
        let env = if d_min > d0 {
            Envelope::Pareto { center, d_min, alpha }
        } else {
            Envelope::CappedPower { center, d0, alpha }
        };
        env.validate()?;
        Ok(env)
    }

    pub fn validate(&self) -> Result<()> {
        let (scale, alpha) = match *self {
            Envelope::Pareto { d_min, alpha, .. } => (d_min, alpha),
            Envelope::CappedPower { d0, alpha, .. } => (d0, alpha),
        };
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(invalid("envelope", format!("scale must be positive, got {scale}")));
        }
        if !(alpha > 2.0) {
            return Err(invalid("envelope", format!("exponent must exceed 2, got {alpha}")));
        }
        Ok(())
    }

    fn pareto_radius<R: Rng + ?Sized>(d_min: f64, alpha: f64, rng: &mut R) -> f64 {
        let u: f64 = 1.0 - rng.random::<f64>();
        d_min * u.powf(-1.0 / (alpha - 2.0))
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Point {
        let (center, d) = match *self {
            Envelope::Pareto { center, d_min, alpha } => (center, Self::pareto_radius(d_min, alpha, rng)),
            Envelope::CappedPower { center, d0, alpha } => {
                // disc part carries mass π d0² out of π d0² α/(α − 2)
                let d = if rng.random::<f64>() < (alpha - 2.0) / alpha {
                    d0 * rng.random::<f64>().sqrt()
                } else {
                    Self::pareto_radius(d0, alpha, rng)
                };
                (center, d)
            }
        };
        let phi = 2.0 * std::f64::consts::PI * rng.random::<f64>();
        center + Point::polar(d, phi)
    }

    pub fn pdf(&self, x: &Point) -> f64 {
        use std::f64::consts::PI;
        match *self {
            Envelope::Pareto { center, d_min, alpha } => {
                let d = x.dist(&center);
                if d < d_min {
                    0.0
                } else {
                    (alpha - 2.0) / (2.0 * PI * d_min * d_min) * (d_min / d).powf(alpha)
                }
            }
            Envelope::CappedPower { center, d0, alpha } => {
                let d = x.dist(&center);
                let z = PI * d0 * d0 * alpha / (alpha - 2.0);
                if d <= d0 {
                    1.0 / z
                } else {
                    (d0 / d).powf(alpha) / z
                }
            }
        }
    }
}

/// Importance-sampling estimate of ∫∫ w(x, y) dx dy with x, y drawn
/// independently from `env`.
pub fn pair_integral_is<W>(w: W, env: &Envelope, samples: u64, seed: u64) -> Result<Estimate>
where
    W: Fn(&Point, &Point) -> f64 + Sync,
{
    env.validate()?;
    if samples == 0 {
        return Err(invalid("samples", "need at least one sample"));
    }
    const CHUNK: u64 = 4096;
    let parts: Vec<RunningStats> = (0..samples.div_ceil(CHUNK))
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c);
            let n = CHUNK.min(samples - c * CHUNK);
            (0..n)
                .map(|_| {
                    let x = env.sample(&mut rng);
                    let y = env.sample(&mut rng);
                    let v = w(&x, &y);
                    if v == 0.0 {
                        0.0
                    } else {
                        v / (env.pdf(&x) * env.pdf(&y))
                    }
                })
                .collect()
        })
        .collect();
    Ok(merge_tree(&parts).estimate())
}
