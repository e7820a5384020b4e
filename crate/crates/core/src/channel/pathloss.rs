use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geom_proc::Point;
use crate::numeric::{integrate_to_infinity, QuadSettings};
use crate::scalar::Scalar;

/// Isotropic path-loss law ℓ(‖x‖).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathLossModel<T = f64> {
    /// (1 + r^α)^{−1}
    Bounded { alpha: T },
    /// r^{−α}
    Unbounded { alpha: T },
}

impl<T: Scalar> PathLossModel<T> {
    pub fn unbounded(alpha: T) -> Result<Self> {
        let p = PathLossModel::Unbounded { alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn bounded(alpha: T) -> Result<Self> {
        let p = PathLossModel::Bounded { alpha };
        p.validate()?;
        Ok(p)
    }

    pub fn alpha(&self) -> T {
        match *self {
            PathLossModel::Bounded { alpha } | PathLossModel::Unbounded { alpha } => alpha,
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, PathLossModel::Bounded { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let a = self.alpha();
        if !(a > T::lit(2.0)) || !a.is_finite() {
            return Err(invalid("alpha", format!("path-loss exponent must exceed 2, got {a}")));
        }
        Ok(())
    }

    /// ℓ at distance `r`; the unbounded law is singular at zero.
    pub fn at_distance(&self, r: T) -> Result<T> {
        if !(r >= T::zero()) {
            return Err(invalid("r", format!("distance must be non-negative, got {r}")));
        }
        match *self {
            PathLossModel::Unbounded { .. } if r == T::zero() => Err(Error::SingularPathLoss),
            _ => Ok(self.from_dist_sq(r * r)),
        }
    }

    /// ℓ(x) for a displacement vector.
    pub fn pathloss(&self, x: &Point<T>) -> Result<T> {
        self.at_distance(x.norm())
    }

    /// ℓ from a squared distance; returns +∞ for the unbounded law at zero.
    #[inline]
    pub fn from_dist_sq(&self, d2: T) -> T {
        match *self {
            PathLossModel::Unbounded { alpha } => d2.powf(-T::lit(0.5) * alpha),
            PathLossModel::Bounded { alpha } => T::one() / (T::one() + d2.powf(T::lit(0.5) * alpha)),
        }
    }

    /// Inverse of ℓ on its range: the distance at which ℓ equals `level`.
    pub fn inverse(&self, level: T) -> Result<T> {
        match *self {
            PathLossModel::Unbounded { alpha } if level > T::zero() => Ok(level.powf(-T::one() / alpha)),
            PathLossModel::Bounded { alpha } if level > T::zero() && level <= T::one() => {
                Ok((T::one() / level - T::one()).powf(T::one() / alpha))
            }
            _ => Err(invalid("level", format!("{level} is outside the path-loss range"))),
        }
    }

    /// ∫_{r0}^∞ r ℓ(r) dr.
    pub fn radial_tail(&self, r0: T) -> Result<T> {
        let a = self.alpha();
        match *self {
            PathLossModel::Unbounded { .. } => {
                if !(r0 > T::zero()) {
                    return Err(Error::Divergent("r^{1-α} is not integrable at the origin".into()));
                }
                Ok(r0.powf(T::lit(2.0) - a) / (a - T::lit(2.0)))
            }
            PathLossModel::Bounded { .. } => {
                let q = integrate_to_infinity(
                    |r: T| r / (T::one() + r.powf(a)),
                    r0.max(T::zero()),
                    QuadSettings::new(T::zero(), T::lit(1e-10).max(T::epsilon() * T::lit(100.0))),
                )?;
                Ok(q.value)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_values() {
        let u = PathLossModel::unbounded(4.0).unwrap();
        let b = PathLossModel::bounded(4.0).unwrap();
        assert_eq!(u.pathloss(&Point::new(2.0, 0.0)).unwrap(), 1.0 / 16.0);
        assert_eq!(b.pathloss(&Point::origin()).unwrap(), 1.0);
        assert_eq!(u.pathloss(&Point::origin()), Err(Error::SingularPathLoss));
        assert!(PathLossModel::unbounded(2.0).is_err());
    }

    #[test]
    fn tails() {
        let u = PathLossModel::unbounded(4.0_f64).unwrap();
        assert!((u.radial_tail(10.0).unwrap() - 0.005).abs() < 1e-15);
        let b = PathLossModel::bounded(4.0).unwrap();
        // ∫_0^∞ r/(1+r⁴) dr = π/4
        assert!((b.radial_tail(0.0).unwrap() - std::f64::consts::FRAC_PI_4).abs() < 1e-9);
        let r = u.inverse(1.0 / 16.0).unwrap();
        assert!((r - 2.0).abs() < 1e-14);
    }
}
