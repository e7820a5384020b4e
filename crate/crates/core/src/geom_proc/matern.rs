//! Matérn type-II hard-core process: density, inversion and product densities.

use serde::{Deserialize, Serialize};

use super::discs::{disc_intersection_area, lens_area};
use super::Point;
use crate::error::{invalid, Error, Result};
use crate::numeric::bisect;
use crate::scalar::Scalar;

/// Highest order served by the product-density routines.
pub const MAX_PRODUCT_ORDER: usize = 4;

/// Parameters of a Matérn type-II (CSMA) process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct MaternSpec<T = f64> {
    /// Contention radius a.
    #[serde(rename = "a", alias = "exclusion_radius")]
    pub exclusion_radius: T,
    #[serde(default = "one")]
    pub parent_density: T,
}

fn one<T: Scalar>() -> T {
    T::one()
}

impl<T: Scalar> MaternSpec<T> {
    /// Unit parent density.
    pub fn new(a: T) -> Result<Self> {
        Self::with_parent_density(a, T::one())
    }

    pub fn with_parent_density(a: T, parent_density: T) -> Result<Self> {
        let s = Self {
            exclusion_radius: a,
            parent_density,
        };
        s.validate()?;
        Ok(s)
    }

    /// Unit-parent-density process of density `eta`.
    pub fn for_density(eta: T) -> Result<Self> {
        Self::new(matern_radius_for_density(eta)?)
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.exclusion_radius;
        if !(a > T::zero() && a.is_finite()) {
            return Err(invalid("a", format!("exclusion radius must be positive, got {a}")));
        }
        let l = self.parent_density;
        if !(l > T::zero() && l.is_finite()) {
            return Err(invalid("parent_density", format!("must be positive, got {l}")));
        }
        Ok(())
    }

    /// Mean number of parents in a contention disc, λπa².
    pub fn mean_neighborhood(&self) -> T {
        self.parent_density * T::PI() * self.exclusion_radius * self.exclusion_radius
    }

    /// Density of retained points, λ(1 − e^{−N̄})/N̄.
    pub fn density(&self) -> T {
        self.parent_density * retention(self.mean_neighborhood())
    }

    /// Exact second-order product density at separation `r`.
    pub fn rho2(&self, r: T) -> T {
        let a = self.exclusion_radius;
        if r <= a {
            return T::zero();
        }
        let l = self.parent_density;
        let n = self.mean_neighborhood();
        let u = l * (T::lit(2.0) * T::PI() * a * a - lens_area(r, a));
        let two = T::lit(2.0);
        // 2[U(1 − e^{−N}) − N(1 − e^{−U})] / [N U (U − N)]
        let num = two * (u * -(-n).exp_m1() - n * -(-u).exp_m1());
        l * l * num / (n * u * (u - n))
    }

    /// Pair correlation ρ⁽²⁾(r)/η².
    pub fn pcf(&self, r: T) -> T {
        let eta = self.density();
        self.rho2(r) / (eta * eta)
    }

    /// Exact k-th order product density at (x₁, …, x_{k−1}, o).
    pub fn product_density(&self, points: &[Point<T>]) -> Result<T> {
        let k = points.len() + 1;
        check_order(k)?;
        let a = self.exclusion_radius;
        let mut all = points.to_vec();
        all.push(Point::origin());
        if violates_hard_core(&all, a) {
            return Ok(T::zero());
        }
        let l = self.parent_density;
        let unions = subset_union_areas(&all, a)?;
        let mut total = T::zero();
        for perm in permutations(k) {
            let rates = suffix_rates(&perm, &unions)
                .into_iter()
                .map(|s| l * s)
                .collect::<Vec<_>>();
            total += ordered_mark_integral_unit(&rates)?;
        }
        Ok(l.powi(k as i32) * total)
    }
}

fn retention<T: Scalar>(n: T) -> T {
    if n == T::zero() {
        T::one()
    } else {
        -(-n).exp_m1() / n
    }
}

/// Density (1 − e^{−πa²})/(πa²) of the unit-parent-density Matérn process.
pub fn matern_density<T: Scalar>(a: T) -> T {
    retention(T::PI() * a * a)
}

/// Inverse of [`matern_density`].
pub fn matern_radius_for_density<T: Scalar>(eta: T) -> Result<T> {
    if !(eta > T::zero() && eta < T::one()) {
        return Err(invalid("eta", format!("density must lie in (0, 1), got {eta}")));
    }
    // solve (1 − e^{−N})/N = η for N ∈ (0, 1/η]
    let hi = T::one() / eta;
    let bracket = bisect(|n: T| retention(n) - eta, T::zero(), hi, T::zero())?;
    Ok((bracket.midpoint() / T::PI()).sqrt())
}

/// Large-radius limit ρ̃⁽ᵏ⁾(x₁, …, x_{k−1}) of the scaled product density
/// a^{2k} ρ⁽ᵏ⁾_a(a x₁, …, a x_{k−1}), with the origin as the k-th point.
///
/// Sums over all k! mark orderings the product of reciprocal union areas of
/// unit discs about the points ranked at or above each position.
pub fn matern_scaled_product_density<T: Scalar>(k: usize, points: &[Point<T>]) -> Result<T> {
    check_order(k)?;
    if points.len() + 1 != k {
        return Err(invalid(
            "points",
            format!("order {k} needs {} points, got {}", k - 1, points.len()),
        ));
    }
    let mut all = points.to_vec();
    all.push(Point::origin());
    if violates_hard_core(&all, T::one()) {
        return Ok(T::zero());
    }
    let unions = subset_union_areas(&all, T::one())?;
    let mut total = T::zero();
    for perm in permutations(k) {
        let mut prod = T::one();
        for s in suffix_rates(&perm, &unions) {
            if !(s > T::zero()) {
                return Err(Error::Numeric(format!("non-positive union area {s}")));
            }
            prod /= s;
        }
        total += prod;
    }
    Ok(total)
}

/// Closed form of ρ̃⁽²⁾ at distance `r`: 2 / (π (2π − V₁(r))) for r > 1.
pub fn matern_scaled_rho2<T: Scalar>(r: T) -> T {
    if r <= T::one() {
        return T::zero();
    }
    let pi = T::PI();
    T::lit(2.0) / (pi * (T::lit(2.0) * pi - lens_area(r, T::one())))
}

fn check_order(k: usize) -> Result<()> {
    if !(2..=MAX_PRODUCT_ORDER).contains(&k) {
        return Err(Error::Unsupported(format!(
            "product densities of order {k}; supported orders are 2..={MAX_PRODUCT_ORDER}"
        )));
    }
    Ok(())
}

fn violates_hard_core<T: Scalar>(pts: &[Point<T>], a: T) -> bool {
    let a2 = a * a;
    pts.iter()
        .enumerate()
        .any(|(i, p)| pts[i + 1..].iter().any(|q| p.dist_sq(q) <= a2))
}

// Union area for every non-empty subset, indexed by bit mask.
fn subset_union_areas<T: Scalar>(pts: &[Point<T>], r: T) -> Result<Vec<T>> {
    let n = pts.len();
    let full = 1usize << n;
    let mut inter = vec![T::zero(); full];
    let mut buf = Vec::with_capacity(n);
    for (mask, slot) in inter.iter_mut().enumerate().skip(1) {
        buf.clear();
        buf.extend((0..n).filter(|i| mask & (1 << i) != 0).map(|i| pts[i]));
        *slot = disc_intersection_area(&buf, r)?;
    }
    let mut unions = vec![T::zero(); full];
    for (mask, slot) in unions.iter_mut().enumerate().skip(1) {
        // inclusion–exclusion over the non-empty sub-masks
        let mut sub = mask;
        let mut acc = T::zero();
        while sub > 0 {
            if sub.count_ones() % 2 == 1 {
                acc += inter[sub];
            } else {
                acc -= inter[sub];
            }
            sub = (sub - 1) & mask;
        }
        *slot = acc;
    }
    Ok(unions)
}

// Union area of the points ranked i..k under `perm`, for each position i.
fn suffix_rates<T: Scalar>(perm: &[usize], unions: &[T]) -> Vec<T> {
    let mut mask = 0usize;
    let mut out = vec![T::zero(); perm.len()];
    for (pos, &idx) in perm.iter().enumerate().rev() {
        mask |= 1 << idx;
        out[pos] = unions[mask];
    }
    out
}

// ∫_{0 ≤ m₁ ≤ … ≤ m_k ≤ 1} exp(−Σ wᵢ mᵢ) where `suffix[i]` = Σ_{j ≥ i} w_j.
// Carried out from the top mark down as a sum of exponentials b·e^{−r m}.
fn ordered_mark_integral_unit<T: Scalar>(suffix: &[T]) -> Result<T> {
    let k = suffix.len();
    let mut terms: Vec<(T, T)> = vec![(T::one(), T::zero())];
    for i in (0..k).rev() {
        let w = suffix[i] - if i + 1 < k { suffix[i + 1] } else { T::zero() };
        let mut next = Vec::with_capacity(terms.len() * 2);
        let mut constant = T::zero();
        for &(b, r) in &terms {
            let s = w + r;
            if !(s > T::zero()) {
                return Err(Error::Numeric(format!("non-positive mark rate {s}")));
            }
            next.push((b / s, s));
            constant -= b * (-s).exp() / s;
        }
        next.push((constant, T::zero()));
        terms = next;
    }
    Ok(terms.iter().fold(T::zero(), |acc, &(b, _)| acc + b))
}

/// All permutations of 0..k in lexicographic order.
fn permutations(k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (0..k.saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            break;
        };
        let j = (i + 1..k).rev().find(|&j| cur[j] > cur[i]).expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn density_values() {
        assert!((matern_density(1.0_f64) - (1.0 - (-PI).exp()) / PI).abs() < 1e-15);
        assert!((matern_density(2.0_f64) - (1.0 - (-4.0 * PI).exp()) / (4.0 * PI)).abs() < 1e-15);
        assert!((matern_density(1e-9_f64) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn inversion_round_trip() {
        for &a in &[0.05_f64, 0.7, 1.7, 6.0] {
            let eta = matern_density(a);
            let back = matern_radius_for_density(eta).unwrap();
            assert!((back - a).abs() < 1e-9, "a={a}: {back}");
            assert!((matern_density(back) - eta).abs() < 1e-12);
        }
        assert!(matern_radius_for_density(1.0_f64).is_err());
    }

    #[test]
    fn rho2_reaches_eta_squared() {
        let s = MaternSpec::new(1.3_f64).unwrap();
        let eta = s.density();
        assert!((s.rho2(2.6) - eta * eta).abs() < 1e-15);
        assert!((s.rho2(5.0) - eta * eta).abs() < 1e-15);
        assert_eq!(s.rho2(1.3), 0.0);
        // exponential-sum route agrees with the closed form
        for &r in &[1.31, 1.8, 2.5] {
            let v = s.product_density(&[Point::new(r, 0.0)]).unwrap();
            assert!((v - s.rho2(r)).abs() < 1e-14, "r={r}");
        }
    }

    #[test]
    fn scaled_rho2() {
        let v = matern_scaled_product_density(2, &[Point::new(2.5_f64, 0.0)]).unwrap();
        assert!((v - 1.0 / (PI * PI)).abs() < 1e-15);
        let v = matern_scaled_product_density(2, &[Point::new(0.5_f64, 0.0)]).unwrap();
        assert_eq!(v, 0.0);
        let v = matern_scaled_product_density(2, &[Point::new(1.5_f64, 0.0)]).unwrap();
        assert!((v - matern_scaled_rho2(1.5)).abs() < 1e-15);
        assert!(matern_scaled_product_density::<f64>(5, &[Point::origin(); 4]).is_err());
        assert!(matern_scaled_product_density(3, &[Point::new(2.0_f64, 0.0)]).is_err());
    }

    #[test]
    fn permutations_are_complete() {
        let p = permutations(4);
        assert_eq!(p.len(), 24);
        let mut sorted = p.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(sorted.len(), 24);
    }
}
