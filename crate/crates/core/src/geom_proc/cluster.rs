use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Thomas cluster process: Poisson parents, Poisson(c̄) daughters displaced by
/// isotropic Gaussians with per-coordinate standard deviation σ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec<T = f64> {
    pub parent_density: T,
    pub mean_cluster_size: T,
    /// σ of the daughter displacement.
    pub spread: T,
}

impl<T: Scalar> ClusterSpec<T> {
    pub fn new(parent_density: T, mean_cluster_size: T, spread: T) -> Result<Self> {
        let s = Self {
            parent_density,
            mean_cluster_size,
            spread,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.parent_density > T::zero() && self.parent_density.is_finite()) {
            return Err(invalid("parent_density", format!("must be positive, got {}", self.parent_density)));
        }
        if !(self.mean_cluster_size >= T::zero() && self.mean_cluster_size.is_finite()) {
            return Err(invalid(
                "mean_cluster_size",
                format!("must be non-negative, got {}", self.mean_cluster_size),
            ));
        }
        if !(self.spread > T::zero() && self.spread.is_finite()) {
            return Err(invalid("spread", format!("must be positive, got {}", self.spread)));
        }
        Ok(())
    }

    /// λ_p c̄.
    pub fn density(&self) -> T {
        self.parent_density * self.mean_cluster_size
    }

    /// Independent thinning of every daughter with retention `p`.
    pub fn thinned(&self, p: T) -> Self {
        Self {
            mean_cluster_size: self.mean_cluster_size * p,
            ..*self
        }
    }

    /// Keeps whole clusters with probability `q`.
    pub fn cluster_thinned(&self, q: T) -> Self {
        Self {
            parent_density: self.parent_density * q,
            ..*self
        }
    }

    /// ρ⁽²⁾(r) = λ² + λ_p c̄² e^{−r²/(4σ²)} / (4πσ²).
    pub fn rho2(&self, r: T) -> T {
        let l = self.density();
        let four_s2 = T::lit(4.0) * self.spread * self.spread;
        let c = self.mean_cluster_size;
        l * l + self.parent_density * c * c * (-r * r / four_s2).exp() / (T::PI() * four_s2)
    }

    /// Pair correlation 1 + e^{−r²/(4σ²)} / (4πσ² λ_p).
    pub fn pcf(&self, r: T) -> T {
        let four_s2 = T::lit(4.0) * self.spread * self.spread;
        T::one() + (-r * r / four_s2).exp() / (T::PI() * four_s2 * self.parent_density)
    }

    /// Ripley's K: πr² + (1 − e^{−r²/(4σ²)}) / λ_p.
    pub fn ripley_k(&self, r: T) -> T {
        let four_s2 = T::lit(4.0) * self.spread * self.spread;
        T::PI() * r * r - (-r * r / four_s2).exp_m1() / self.parent_density
    }

    /// Padding that keeps all but a 10⁻¹² fraction of daughters of outside
    /// parents from reaching a window.
    pub fn padding(&self) -> T {
        // P(|N(0, σ²I)| > t) = e^{−t²/(2σ²)}
        self.spread * (T::lit(2.0) * T::lit(1e12).ln()).sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ripley_k_is_integral_of_pcf() {
        let c = ClusterSpec::new(1.0 / 15.0, 15.0, 2.0_f64).unwrap();
        assert!((c.density() - 1.0).abs() < 1e-15);
        // K(r) = 2π ∫_0^r g(t) t dt
        let r = 3.0;
        let q = crate::numeric::integrate(
            |t: f64| 2.0 * std::f64::consts::PI * c.pcf(t) * t,
            0.0,
            r,
            crate::numeric::QuadSettings::default(),
        )
        .unwrap();
        assert!((q.value - c.ripley_k(r)).abs() < 1e-10);
        assert!(c.pcf(0.0) > 1.0);
    }
}
