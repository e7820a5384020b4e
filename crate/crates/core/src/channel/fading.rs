use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numeric::{gamma_p, gamma_q, ln_gamma};
use crate::scalar::Scalar;

/// Highest Taylor order served by [`FadingModel::taylor_head`].
pub const TAYLOR_ORDER_CAP: usize = 30;

/// Power-gain distribution of a link.
///
/// All stochastic kinds are gamma laws, which is what lets the outage kernels
/// below avoid numerical integration in most cases.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum FadingModel<T = f64> {
    /// Exponential power gain.
    Rayleigh,
    /// Gamma(m, 1/m) power gain.
    Nakagami { m: T },
    /// Sum of `antennas` unit exponentials (maximum-ratio combining).
    #[serde(alias = "chi_square_beamforming")]
    Beamforming { antennas: u32 },
    /// Constant unit gain.
    Deterministic,
}

/// Leading terms of F(x) = 1 − c₀x^ν + Σ_{k≥1} c_k/k! · x^{k+ν}.
#[derive(Debug, Clone, PartialEq)]
pub struct TaylorHead<T> {
    pub nu: u32,
    pub c0: T,
    /// `coeffs[k - 1]` holds c_k.
    pub coeffs: Vec<T>,
    /// Smallest b with Σ|c_k| b^{−k} < ∞ (limit of |c_{k+1}/c_k|).
    pub min_summable_b: T,
}

impl<T: Scalar> TaylorHead<T> {
    /// Evaluates the truncated series.
    pub fn eval(&self, x: T) -> T {
        let nu = T::count(self.nu as usize);
        let mut acc = T::one() - self.c0 * x.powf(nu);
        let mut pow = x.powf(nu);
        let mut fact = T::one();
        for (k, &c) in self.coeffs.iter().enumerate() {
            pow *= x;
            fact *= T::count(k + 1);
            acc += c / fact * pow;
        }
        acc
    }
}

impl<T: Scalar> Default for FadingModel<T> {
    fn default() -> Self {
        FadingModel::Rayleigh
    }
}

impl<T: Scalar> FadingModel<T> {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FadingModel::Nakagami { m } if !(m >= T::one() && m.is_finite()) => {
                Err(invalid("m", format!("Nakagami parameter must be finite and at least 1, got {m}")))
            }
            FadingModel::Beamforming { antennas: 0 } => {
                Err(invalid("antennas", "at least one receive antenna is required"))
            }
            _ => Ok(()),
        }
    }

    /// Shape and rate of the gamma law, or `None` for deterministic gain.
    pub fn shape_rate(&self) -> Option<(T, T)> {
        match *self {
            FadingModel::Rayleigh => Some((T::one(), T::one())),
            FadingModel::Nakagami { m } => Some((m, m)),
            FadingModel::Beamforming { antennas } => Some((T::count(antennas as usize), T::one())),
            FadingModel::Deterministic => None,
        }
    }

    /// P(W > x).
    pub fn ccdf(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(invalid("x", format!("ccdf argument must be non-negative, got {x}")));
        }
        match self.shape_rate() {
            Some((k, rate)) if k == T::one() => Ok((-rate * x).exp()),
            Some((k, rate)) => gamma_q(k, rate * x),
            None => Ok(if x < T::one() { T::one() } else { T::zero() }),
        }
    }

    /// P(W ≤ x), accurate for small x.
    pub fn cdf(&self, x: T) -> Result<T> {
        if !(x >= T::zero()) {
            return Err(invalid("x", format!("cdf argument must be non-negative, got {x}")));
        }
        match self.shape_rate() {
            Some((k, rate)) if k == T::one() => Ok(-(-rate * x).exp_m1()),
            Some((k, rate)) => gamma_p(k, rate * x),
            None => Ok(if x < T::one() { T::zero() } else { T::one() }),
        }
    }

    /// Density of W; deterministic gain has none.
    pub fn pdf(&self, x: T) -> Result<T> {
        let (k, rate) = self
            .shape_rate()
            .ok_or_else(|| Error::Unsupported("deterministic gain has no density".into()))?;
        if x < T::zero() {
            return Ok(T::zero());
        }
        if let FadingModel::Rayleigh = self {
            return Ok((-x).exp());
        }
        if x == T::zero() {
            return Ok(if k == T::one() { rate } else { T::zero() });
        }
        let ln = k * rate.ln() + (k - T::one()) * x.ln() - rate * x - ln_gamma(k);
        Ok(ln.exp())
    }

    /// Lipschitz constant of the ccdf, i.e. the supremum of the density.
    pub fn lipschitz(&self) -> T {
        match self.shape_rate() {
            Some((k, rate)) if k <= T::one() => rate,
            Some((k, rate)) => self.pdf((k - T::one()) / rate).unwrap_or(T::infinity()),
            None => T::infinity(),
        }
    }

    pub fn mean(&self) -> T {
        self.moment(1)
    }

    /// E[Wⁿ].
    pub fn moment(&self, n: u32) -> T {
        match self.shape_rate() {
            // Γ(k + n) / (Γ(k) rateⁿ) as a finite product
            Some((k, rate)) => (0..n).fold(T::one(), |acc, i| acc * (k + T::count(i as usize)) / rate),
            None => T::one(),
        }
    }

    /// E[e^{−sW}] for s ≥ 0.
    pub fn laplace(&self, s: T) -> T {
        self.ln_laplace(s).exp()
    }

    pub fn ln_laplace(&self, s: T) -> T {
        match self.shape_rate() {
            Some((k, rate)) => -k * (s / rate).ln_1p(),
            None => -s,
        }
    }

    /// 1 − E[e^{−sW}] without cancellation for small s.
    pub fn one_minus_laplace(&self, s: T) -> T {
        -self.ln_laplace(s).exp_m1()
    }

    /// Taylor head of the ccdf about zero, through order `order` (≤ 30).
    pub fn taylor_head(&self, order: usize) -> Result<TaylorHead<T>> {
        self.validate()?;
        if order > TAYLOR_ORDER_CAP {
            return Err(invalid(
                "order",
                format!("Taylor order is capped at {TAYLOR_ORDER_CAP}, got {order}"),
            ));
        }
        let (k, rate) = self.shape_rate().ok_or_else(|| {
            Error::Unsupported("deterministic gain has a discontinuous ccdf and no Taylor expansion".into())
        })?;
        if k != k.round() {
            return Err(Error::Unsupported(format!(
                "Taylor head needs an integer diversity order, got m = {k}"
            )));
        }
        let nu = k.to_u32().unwrap_or(1);
        // Q(k, rate·x) = 1 − (rate x)^k/Γ(k) Σ_n (−rate x)^n / (n! (k + n))
        let ln_front = k * rate.ln() - ln_gamma(k);
        let c0 = (ln_front - k.ln()).exp();
        let coeffs = (1..=order)
            .map(|i| {
                let i_t = T::count(i);
                let sign = if i % 2 == 1 { T::one() } else { -T::one() };
                sign * (ln_front + i_t * rate.ln()).exp() / (k + i_t)
            })
            .collect();
        Ok(TaylorHead {
            nu,
            c0,
            coeffs,
            min_summable_b: rate,
        })
    }
}

impl FadingModel<f64> {
    /// Distribution object for drawing gains.
    pub fn sampler(&self) -> Result<GainSampler> {
        self.validate()?;
        Ok(match *self {
            FadingModel::Rayleigh => GainSampler::Exponential,
            FadingModel::Deterministic => GainSampler::Constant,
            _ => {
                let (k, rate) = self.shape_rate().expect("stochastic kind");
                GainSampler::Gamma(
                    Gamma::new(k, 1.0 / rate).map_err(|e| invalid("shape", e.to_string()))?,
                )
            }
        })
    }
}

/// Sampler built by [`FadingModel::sampler`].
#[derive(Debug, Clone, Copy)]
pub enum GainSampler {
    Exponential,
    Gamma(Gamma<f64>),
    Constant,
}

impl Distribution<f64> for GainSampler {
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self {
            GainSampler::Exponential => Exp1.sample(rng),
            GainSampler::Gamma(g) => g.sample(rng),
            GainSampler::Constant => 1.0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_basics() {
        let f = FadingModel::<f64>::Rayleigh;
        assert_eq!(f.ccdf(0.0).unwrap(), 1.0);
        assert!((f.ccdf(1.0).unwrap() - (-1.0f64).exp()).abs() < 1e-16);
        assert_eq!(f.moment(3), 6.0);
        assert_eq!(f.laplace(1.0), 0.5);
        assert!(f.ccdf(-0.1).is_err());
    }

    #[test]
    fn nakagami_moment_and_head() {
        let f = FadingModel::Nakagami { m: 2.0_f64 };
        assert!((f.moment(2) - 1.5).abs() < 1e-15);
        let head = f.taylor_head(5).unwrap();
        assert_eq!(head.nu, 2);
        assert!((head.c0 - 2.0).abs() < 1e-14);
        assert!(FadingModel::Nakagami { m: 2.5_f64 }.taylor_head(3).is_err());
        assert!(FadingModel::<f64>::Deterministic.taylor_head(3).is_err());
        assert!(FadingModel::<f64>::Rayleigh.taylor_head(31).is_err());
    }

    #[test]
    fn lipschitz_constants() {
        assert_eq!(FadingModel::<f64>::Rayleigh.lipschitz(), 1.0);
        // Gamma(2, 1/2) density peaks at x = 1/2 with value 4·(1/2)·e^{-1}
        let l = FadingModel::Nakagami { m: 2.0_f64 }.lipschitz();
        assert!((l - 2.0 * (-1.0f64).exp()).abs() < 1e-14);
        assert!(FadingModel::<f64>::Deterministic.lipschitz().is_infinite());
    }

    #[test]
    fn serde_shape() {
        let f: FadingModel = serde_json::from_str(r#"{"kind":"nakagami","m":2}"#).unwrap();
        assert_eq!(f, FadingModel::Nakagami { m: 2.0 });
        let f: FadingModel = serde_json::from_str(r#"{"kind":"chi_square_beamforming","antennas":4}"#).unwrap();
        assert_eq!(f, FadingModel::Beamforming { antennas: 4 });
    }
}
