use crate::channel::FadingModel;
use crate::error::{invalid, Error, Result};
use crate::scalar::Scalar;

/// Leading order (ν_N, c₀(N)) of F(x + N) = F(N) − c₀(N) x^{ν_N} + ….
///
/// Without noise this is the Taylor head of F; with N > 0 the order drops to
/// one and c₀(N) is the density of the signal gain at N.
pub fn noise_taylor<T: Scalar>(model: &FadingModel<T>, noise: T) -> Result<(u32, T)> {
    if !(noise >= T::zero() && noise.is_finite()) {
        return Err(invalid("N", format!("noise term must be finite and non-negative, got {noise}")));
    }
    if noise == T::zero() {
        let head = model.taylor_head(0)?;
        return Ok((head.nu, head.c0));
    }
    match model {
        FadingModel::Deterministic => Err(Error::Unsupported(
            "deterministic signal gain has no density at the noise level".into(),
        )),
        _ => Ok((1, model.pdf(noise)?)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rayleigh_noise_coefficient() {
        for &n in &[0.1_f64, 0.5, 2.0] {
            let (nu, c0) = noise_taylor(&FadingModel::Rayleigh, n).unwrap();
            assert_eq!(nu, 1);
            assert_eq!(c0, (-n).exp());
        }
        assert_eq!(noise_taylor(&FadingModel::Nakagami { m: 2.0_f64 }, 0.0).unwrap().0, 2);
    }
}
