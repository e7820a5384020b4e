use serde::{Deserialize, Serialize};

use super::{FadingModel, PathLossModel};
use crate::error::{invalid, Result};
use crate::geom_proc::Point;
use crate::numeric::{beta_inc, gamma_q, integrate, integrate_to_infinity, QuadSettings};
use crate::scalar::Scalar;

/// Typical link: threshold, length, propagation and fading.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound(deserialize = "T: Scalar + Deserialize<'de>"))]
pub struct LinkConfig<T = f64> {
    /// SIR threshold θ.
    pub theta: T,
    /// Transmitter–receiver distance R.
    #[serde(rename = "R", alias = "distance")]
    pub distance: T,
    pub pathloss: PathLossModel<T>,
    /// Normalised noise N = σ²θ / (P ℓ(R)).
    #[serde(rename = "N", alias = "noise", default = "zero")]
    pub noise: T,
    #[serde(default)]
    pub sd_fading: FadingModel<T>,
    #[serde(default)]
    pub interferer_fading: FadingModel<T>,
}

fn zero<T: Scalar>() -> T {
    T::zero()
}

fn kernel_settings<T: Scalar>() -> QuadSettings<T> {
    let rel = (T::epsilon() * T::lit(100.0)).max(T::lit(1e-11));
    QuadSettings::new(T::min_positive_value(), rel)
}

impl<T: Scalar> LinkConfig<T> {
    /// Noise-free link with Rayleigh fading on every hop.
    pub fn new(theta: T, distance: T, pathloss: PathLossModel<T>) -> Result<Self> {
        let l = Self {
            theta,
            distance,
            pathloss,
            noise: T::zero(),
            sd_fading: FadingModel::Rayleigh,
            interferer_fading: FadingModel::Rayleigh,
        };
        l.validate()?;
        Ok(l)
    }

    pub fn with_noise(mut self, noise: T) -> Result<Self> {
        self.noise = noise;
        self.validate()?;
        Ok(self)
    }

    pub fn with_sd_fading(mut self, f: FadingModel<T>) -> Result<Self> {
        self.sd_fading = f;
        self.validate()?;
        Ok(self)
    }

    pub fn with_interferer_fading(mut self, f: FadingModel<T>) -> Result<Self> {
        self.interferer_fading = f;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > T::zero() && self.theta.is_finite()) {
            return Err(invalid("theta", format!("must be positive and finite, got {}", self.theta)));
        }
        if !(self.distance > T::zero() && self.distance.is_finite()) {
            return Err(invalid("R", format!("must be positive and finite, got {}", self.distance)));
        }
        if !(self.noise >= T::zero() && self.noise.is_finite()) {
            return Err(invalid("N", format!("must be non-negative and finite, got {}", self.noise)));
        }
        self.pathloss.validate()?;
        self.sd_fading.validate()?;
        self.interferer_fading.validate()
    }

    /// Receiver of the typical link, r(o) = (R, 0).
    pub fn receiver(&self) -> Point<T> {
        Point::new(self.distance, T::zero())
    }

    pub fn signal_pathloss(&self) -> T {
        self.pathloss.from_dist_sq(self.distance * self.distance)
    }

    /// θ/ℓ(R), the factor converting interference into a ccdf argument.
    pub fn interference_scale(&self) -> T {
        self.theta / self.signal_pathloss()
    }

    /// F_sd(θI/ℓ(R) + N).
    pub fn success_given_interference(&self, interference: T) -> Result<T> {
        self.sd_fading
            .ccdf(self.interference_scale() * interference + self.noise)
    }

    /// P₀ = F_sd(N), the success probability with no interferers.
    pub fn noise_only_success(&self) -> Result<T> {
        self.sd_fading.ccdf(self.noise)
    }

    /// Normalised interference θℓ(x − r(o))/ℓ(R) from an interferer at `x`.
    pub fn normalized_interference(&self, x: &Point<T>) -> Result<T> {
        let d = *x - self.receiver();
        Ok(self.interference_scale() * self.pathloss.pathloss(&d)?)
    }

    /// 1 − E_h[F_sd(h θℓ(x − r(o))/ℓ(R) + N)].
    pub fn single_interferer_outage(&self, x: &Point<T>) -> Result<T> {
        let s = self.normalized_interference(x)?;
        Ok(T::one() - self.noise_only_success()? + self.excess_outage(s)?)
    }

    /// F_sd(N) − E_h[F_sd(h s + N)]: the outage added by one interferer of
    /// normalised strength `s`. Evaluated without subtracting nearly equal
    /// numbers, so far interferers keep full relative accuracy.
    pub fn excess_outage(&self, s: T) -> Result<T> {
        if !(s >= T::zero()) {
            return Err(invalid("s", format!("normalised interference must be non-negative, got {s}")));
        }
        if s == T::zero() {
            return Ok(T::zero());
        }
        let n = self.noise;
        let h = self.interferer_fading;
        if s.is_infinite() {
            return self.noise_only_success();
        }
        match (self.sd_fading.shape_rate(), h.shape_rate()) {
            // exponential signal: F(hs + N) = e^{−N} e^{−hs}
            (Some((k, rate)), _) if k == T::one() => {
                Ok((-rate * n).exp() * h.one_minus_laplace(rate * s))
            }
            // gamma ratio: P(W < hs) = I_{c/(1+c)}(k_w, k_h)
            (Some((kw, bw)), Some((kh, bh))) if n == T::zero() => {
                let c = bw * s / bh;
                beta_inc(kw, kh, c / (T::one() + c))
            }
            (Some((kw, bw)), None) if n == T::zero() => crate::numeric::gamma_p(kw, bw * s),
            (None, _) => {
                // unit signal: success iff hs + N < 1
                if n >= T::one() {
                    return Ok(T::zero());
                }
                let u = (T::one() - n) / s;
                match h.shape_rate() {
                    Some((kh, bh)) => gamma_q(kh, bh * u),
                    None => Ok(if u <= T::one() { T::one() } else { T::zero() }),
                }
            }
            (Some(_), hs) => {
                // s ∫_0^∞ f_W(N + s u) P(h > u) du
                let sd = self.sd_fading;
                let value = match hs {
                    Some((kh, bh)) => integrate_to_infinity(
                        |u: T| {
                            let f = sd.pdf(n + s * u).unwrap_or(T::zero());
                            if f == T::zero() {
                                T::zero()
                            } else {
                                f * gamma_q(kh, bh * u).unwrap_or(T::zero())
                            }
                        },
                        T::zero(),
                        kernel_settings(),
                    )?
                    .value,
                    None => integrate(
                        |u: T| sd.pdf(n + s * u).unwrap_or(T::zero()),
                        T::zero(),
                        T::one(),
                        kernel_settings(),
                    )?
                    .value,
                };
                Ok(s * value)
            }
        }
    }

    /// Δ(x) = 1 − L_h(θℓ(x − r(o))/ℓ(R)).
    pub fn laplace_delta(&self, x: &Point<T>) -> Result<T> {
        let s = self.normalized_interference(x)?;
        Ok(self.interferer_fading.one_minus_laplace(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link() -> LinkConfig {
        LinkConfig::new(1.0, 1.0, PathLossModel::unbounded(4.0).unwrap()).unwrap()
    }

    #[test]
    fn rayleigh_laplace_form() {
        let l = link();
        // θℓ(x−r)/ℓ(R) = 1 at distance 1 from the receiver
        let x = Point::new(2.0, 0.0);
        assert!((l.single_interferer_outage(&x).unwrap() - 0.5).abs() < 1e-15);
        let far = Point::new(1.0e8, 0.0);
        assert!(l.single_interferer_outage(&far).unwrap() < 1e-31);
    }

    #[test]
    fn nakagami_interferer_matches_transform() {
        let m = 3.0;
        let l = link().with_interferer_fading(FadingModel::Nakagami { m }).unwrap();
        for &s in &[1e-9, 0.3, 2.0, 40.0] {
            let expect = 1.0 - (1.0 + s / m).powf(-m);
            let got = l.excess_outage(s).unwrap();
            assert!((got - expect).abs() <= 1e-12 * expect + 1e-15, "s={s}");
        }
    }

    #[test]
    fn kernel_routes_agree() {
        // beta route (N = 0) vs quadrature route (tiny N) for a gamma/gamma pair
        let l = link()
            .with_sd_fading(FadingModel::Nakagami { m: 2.0 })
            .unwrap()
            .with_interferer_fading(FadingModel::Beamforming { antennas: 3 })
            .unwrap();
        let tiny = l.with_noise(1e-12).unwrap();
        for &s in &[0.01, 0.5, 3.0] {
            let a = l.excess_outage(s).unwrap();
            let b = tiny.excess_outage(s).unwrap();
            assert!((a - b).abs() < 1e-9 * a, "s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn noise_shifts_rayleigh_kernel() {
        let l = link().with_noise(0.5).unwrap();
        let x = Point::new(2.0, 0.0);
        let expect = 1.0 - (-0.5f64).exp() * 0.5;
        assert!((l.single_interferer_outage(&x).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn serde_round_trip() {
        let l: LinkConfig = serde_json::from_str(
            r#"{"theta":1,"R":1,"pathloss":{"kind":"bounded","alpha":3.5},"sd_fading":{"kind":"nakagami","m":2}}"#,
        )
        .unwrap();
        assert_eq!(l.noise, 0.0);
        assert_eq!(l.interferer_fading, FadingModel::Rayleigh);
        let back: LinkConfig = serde_json::from_str(&serde_json::to_string(&l).unwrap()).unwrap();
        assert_eq!(back, l);
    }
}
