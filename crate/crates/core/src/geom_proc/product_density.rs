//! Isotropic second-order structure of stationary transmitter processes.

use serde::{Deserialize, Serialize};

use super::{matern_scaled_rho2, ClusterSpec, MaternSpec};
use crate::error::{invalid, Result};
use crate::numeric::{integrate_breaks, QuadSettings};
use crate::scalar::Scalar;

/// Second-order product density ρ⁽²⁾(r) of an isotropic process.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub enum ProductDensityModel<T = f64> {
    /// Poisson process: ρ⁽²⁾ ≡ η².
    PppConstant { density: T },
    /// Large-radius Matérn limit ρ⁽²⁾(r) = ρ̃⁽²⁾(r/a)/a⁴ with η = 1/(πa²).
    MaternScaled { a: T },
    /// Exact Matérn type-II product density.
    MaternExact(MaternSpec<T>),
    ThomasClosedForm(ClusterSpec<T>),
    /// Pair correlation tabulated on increasing radii, linearly interpolated
    /// and equal to 1 beyond the last radius.
    Empirical { density: T, r: Vec<T>, pcf: Vec<T> },
}

impl<T: Scalar> ProductDensityModel<T> {
    pub fn empirical(density: T, r: Vec<T>, pcf: Vec<T>) -> Result<Self> {
        if r.is_empty() || r.len() != pcf.len() {
            return Err(invalid("pcf", "radii and values must be non-empty and aligned"));
        }
        if r.windows(2).any(|w| !(w[0] < w[1])) || r[0] < T::zero() {
            return Err(invalid("r", "radii must be non-negative and strictly increasing"));
        }
        if pcf.iter().any(|g| !(*g >= T::zero() && g.is_finite())) {
            return Err(invalid("pcf", "values must be finite and non-negative"));
        }
        Ok(ProductDensityModel::Empirical { density, r, pcf })
    }

    /// Intensity η.
    pub fn density(&self) -> T {
        match self {
            ProductDensityModel::PppConstant { density } => *density,
            ProductDensityModel::MaternScaled { a } => T::one() / (T::PI() * *a * *a),
            ProductDensityModel::MaternExact(s) => s.density(),
            ProductDensityModel::ThomasClosedForm(c) => c.density(),
            ProductDensityModel::Empirical { density, .. } => *density,
        }
    }

    pub fn rho2(&self, r: T) -> T {
        match self {
            ProductDensityModel::PppConstant { density } => *density * *density,
            ProductDensityModel::MaternScaled { a } => matern_scaled_rho2(r / *a) / a.powi(4),
            ProductDensityModel::MaternExact(s) => s.rho2(r),
            ProductDensityModel::ThomasClosedForm(c) => c.rho2(r),
            ProductDensityModel::Empirical { density, .. } => *density * *density * self.pcf(r),
        }
    }

    /// g(r) = ρ⁽²⁾(r)/η².
    pub fn pcf(&self, r: T) -> T {
        match self {
            ProductDensityModel::PppConstant { .. } => T::one(),
            ProductDensityModel::ThomasClosedForm(c) => c.pcf(r),
            ProductDensityModel::MaternExact(s) => s.pcf(r),
            ProductDensityModel::Empirical { r: grid, pcf, .. } => interpolate(grid, pcf, r),
            ProductDensityModel::MaternScaled { .. } => {
                let eta = self.density();
                self.rho2(r) / (eta * eta)
            }
        }
    }

    /// Radius beyond which g differs from 1 by less than 10⁻¹².
    pub fn correlation_range(&self) -> T {
        match self {
            ProductDensityModel::PppConstant { .. } => T::zero(),
            ProductDensityModel::MaternScaled { a } => T::lit(2.0) * *a,
            ProductDensityModel::MaternExact(s) => T::lit(2.0) * s.exclusion_radius,
            ProductDensityModel::ThomasClosedForm(c) => {
                // e^{−r²/(4σ²)} / (4πσ²λ_p) = 10⁻¹²
                let four_s2 = T::lit(4.0) * c.spread * c.spread;
                let peak = T::one() / (T::PI() * four_s2 * c.parent_density);
                let ratio = peak / T::lit(1e-12);
                if ratio <= T::one() {
                    T::zero()
                } else {
                    (four_s2 * ratio.ln()).sqrt()
                }
            }
            ProductDensityModel::Empirical { r, .. } => *r.last().expect("validated non-empty"),
        }
    }

    /// Radii where g has kinks or changes regime, for quadrature splitting.
    pub fn breakpoints(&self) -> Vec<T> {
        match self {
            ProductDensityModel::PppConstant { .. } => Vec::new(),
            ProductDensityModel::MaternScaled { a } => vec![*a, T::lit(2.0) * *a],
            ProductDensityModel::MaternExact(s) => vec![s.exclusion_radius, T::lit(2.0) * s.exclusion_radius],
            ProductDensityModel::ThomasClosedForm(c) => {
                let s = c.spread;
                vec![T::lit(2.0) * s, T::lit(4.0) * s, self.correlation_range()]
            }
            ProductDensityModel::Empirical { r, .. } => r.clone(),
        }
    }

    /// sup_{s ≥ r} ρ⁽²⁾(s), used to bound truncation tails.
    pub fn sup_rho2_beyond(&self, r: T) -> T {
        match self {
            ProductDensityModel::PppConstant { .. } => self.rho2(r),
            // decreasing on (a, 2a], constant afterwards
            ProductDensityModel::MaternScaled { a } => {
                let a = *a;
                self.rho2(if r <= a { a * (T::one() + T::epsilon()) } else { r })
            }
            ProductDensityModel::MaternExact(s) => {
                let a = s.exclusion_radius;
                self.rho2(if r <= a { a * (T::one() + T::epsilon()) } else { r })
            }
            ProductDensityModel::ThomasClosedForm(c) => c.rho2(r.max(T::zero())),
            ProductDensityModel::Empirical { density, r: grid, pcf } => {
                let mut g = interpolate(grid, pcf, r).max(T::one());
                for (ri, gi) in grid.iter().zip(pcf) {
                    if *ri >= r {
                        g = g.max(*gi);
                    }
                }
                *density * *density * g
            }
        }
    }

    /// Ripley's K(r) = 2π ∫₀ʳ g(s) s ds.
    pub fn ripley_k(&self, r: T) -> Result<T> {
        if r <= T::zero() {
            return Ok(T::zero());
        }
        match self {
            ProductDensityModel::PppConstant { .. } => Ok(T::PI() * r * r),
            ProductDensityModel::ThomasClosedForm(c) => Ok(c.ripley_k(r)),
            _ => {
                let mut pts = vec![T::zero()];
                pts.extend(self.breakpoints().into_iter().filter(|b| *b > T::zero() && *b < r));
                pts.push(r);
                let q = integrate_breaks(|s| self.pcf(s) * s, &pts, QuadSettings::default())?;
                Ok(T::lit(2.0) * T::PI() * q.value)
            }
        }
    }
}

fn interpolate<T: Scalar>(r: &[T], g: &[T], x: T) -> T {
    let last = r.len() - 1;
    if x >= r[last] {
        return T::one();
    }
    if x <= r[0] {
        return g[0];
    }
    let i = r.partition_point(|ri| *ri <= x);
    let (r0, r1, g0, g1) = (r[i - 1], r[i], g[i - 1], g[i]);
    g0 + (g1 - g0) * (x - r0) / (r1 - r0)
}
