//! Areas of intersections and unions of equal-radius discs.

use rand::Rng;

use super::Point;
use crate::error::{invalid, Error, Result};
use crate::numeric::RunningStats;
use crate::scalar::Scalar;

/// Area of ∩ᵢ B(cᵢ, r).
///
/// Exact for any number of discs: the boundary of the intersection is traced
/// arc by arc and its area obtained from Green's theorem.
pub fn disc_intersection_area<T: Scalar>(centers: &[Point<T>], radius: T) -> Result<T> {
    if centers.is_empty() {
        return Err(Error::Empty("disc centers"));
    }
    if !(radius > T::zero()) {
        return Err(invalid("radius", format!("must be positive, got {radius}")));
    }
    let r = radius;
    let two_r_sq = T::lit(4.0) * r * r;
    let coincide = T::epsilon() * T::lit(16.0) * r;
    let mut distinct: Vec<Point<T>> = Vec::with_capacity(centers.len());
    for c in centers {
        if !c.is_finite() {
            return Err(invalid("centers", "non-finite coordinate"));
        }
        if !distinct.iter().any(|d| d.dist(c) <= coincide) {
            distinct.push(*c);
        }
    }
    for (i, a) in distinct.iter().enumerate() {
        for b in &distinct[i + 1..] {
            if a.dist_sq(b) >= two_r_sq {
                return Ok(T::zero());
            }
        }
    }
    let pi = T::PI();
    match distinct.len() {
        1 => return Ok(pi * r * r),
        2 => return Ok(lens_area(distinct[0].dist(&distinct[1]), r)),
        _ => {}
    }
    let tau = T::TAU();
    let half = T::lit(0.5);
    let mut area = T::zero();
    for (i, ci) in distinct.iter().enumerate() {
        // arc of circle i lying inside every other disc, as (start, length)
        let mut arc: Option<(T, T)> = None;
        let mut empty = false;
        for (j, cj) in distinct.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = ci.dist(cj);
            let phi = (cj.y - ci.y).atan2(cj.x - ci.x);
            let beta = (d / (T::lit(2.0) * r)).min(T::one()).acos();
            let next = (phi - beta, T::lit(2.0) * beta);
            arc = match arc {
                None => Some(next),
                Some(cur) => intersect_arcs(cur, next, tau),
            };
            if arc.is_none() {
                empty = true;
                break;
            }
        }
        if empty {
            continue;
        }
        let (t0, len) = arc.expect("at least two distinct discs");
        let t1 = t0 + len;
        area += half
            * (r * r * len + r * ci.x * (t1.sin() - t0.sin()) - r * ci.y * (t1.cos() - t0.cos()));
    }
    Ok(area.max(T::zero()))
}

/// Area of the lens B(o, r) ∩ B(x, r) with ‖x‖ = d.
pub fn lens_area<T: Scalar>(d: T, r: T) -> T {
    let two = T::lit(2.0);
    if d >= two * r {
        return T::zero();
    }
    let d = d.max(T::zero());
    two * r * r * (d / (two * r)).acos() - d / two * (T::lit(4.0) * r * r - d * d).sqrt()
}

// Intersection of two circular arcs, each shorter than π, so it is a single arc.
fn intersect_arcs<T: Scalar>(a: (T, T), b: (T, T), tau: T) -> Option<(T, T)> {
    let (sa, la) = a;
    let (sb, lb) = b;
    let mut delta = (sb - sa) % tau;
    if delta < T::zero() {
        delta += tau;
    }
    if delta < la {
        Some((sb, (la - delta).min(lb)))
    } else if delta + lb > tau {
        Some((sa, (delta + lb - tau).min(la)))
    } else {
        None
    }
}

/// Area of ∪ᵢ B(cᵢ, r) by inclusion–exclusion over intersection areas.
pub fn disc_union_area<T: Scalar>(centers: &[Point<T>], radius: T) -> Result<T> {
    let n = centers.len();
    if n == 0 {
        return Err(Error::Empty("disc centers"));
    }
    if n > 16 {
        return Err(invalid("centers", "union area supports at most 16 discs"));
    }
    let mut total = T::zero();
    let mut subset = Vec::with_capacity(n);
    for mask in 1u32..(1 << n) {
        subset.clear();
        subset.extend((0..n).filter(|i| mask & (1 << i) != 0).map(|i| centers[i]));
        let v = disc_intersection_area(&subset, radius)?;
        if subset.len() % 2 == 1 {
            total += v;
        } else {
            total -= v;
        }
    }
    Ok(total)
}

/// Monte Carlo estimate of ∩ᵢ B(cᵢ, r) with its standard error.
pub fn disc_intersection_area_mc<R: Rng + ?Sized>(
    centers: &[Point],
    radius: f64,
    samples: usize,
    rng: &mut R,
) -> Result<(f64, f64)> {
    let first = *centers.first().ok_or(Error::Empty("disc centers"))?;
    if !(radius > 0.0) {
        return Err(invalid("radius", format!("must be positive, got {radius}")));
    }
    let r2 = radius * radius;
    let box_area = 4.0 * r2;
    let mut stats = RunningStats::new();
    for _ in 0..samples {
        let p = Point::new(
            first.x + radius * (2.0 * rng.random::<f64>() - 1.0),
            first.y + radius * (2.0 * rng.random::<f64>() - 1.0),
        );
        let inside = centers.iter().all(|c| c.dist_sq(&p) <= r2);
        stats.push(if inside { box_area } else { 0.0 });
    }
    Ok((stats.mean(), stats.std_error()))
}
