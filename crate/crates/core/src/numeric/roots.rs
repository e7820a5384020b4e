//! Bracketing root finders.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Final bracket `[lo, hi]` of a bisection run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket<T> {
    pub lo: T,
    pub hi: T,
    pub iterations: usize,
}

impl<T: Scalar> Bracket<T> {
    pub fn midpoint(&self) -> T {
        T::lit(0.5) * (self.lo + self.hi)
    }

    pub fn half_width(&self) -> T {
        T::lit(0.5) * (self.hi - self.lo).abs()
    }
}

/// Finds a sign change of `f` on `[lo, hi]` by bisection.
///
/// Stops once the bracket is narrower than `x_tol` or the midpoint no longer
/// moves in floating point.
pub fn bisect<T, F>(mut f: F, lo: T, hi: T, x_tol: T) -> Result<Bracket<T>>
where
    T: Scalar,
    F: FnMut(T) -> T,
{
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let fb = f(b);
    if fa == T::zero() {
        return Ok(Bracket { lo: a, hi: a, iterations: 0 });
    }
    if fb == T::zero() {
        return Ok(Bracket { lo: b, hi: b, iterations: 0 });
    }
    if !(fa.is_finite() && fb.is_finite()) || (fa > T::zero()) == (fb > T::zero()) {
        return Err(Error::NotBracketed {
            lo: a.as_f64(),
            hi: b.as_f64(),
        });
    }
    let mut iterations = 0;
    while b - a > x_tol {
        let m = T::lit(0.5) * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = f(m);
        iterations += 1;
        if fm == T::zero() {
            return Ok(Bracket { lo: m, hi: m, iterations });
        }
        if (fm > T::zero()) == (fa > T::zero()) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    Ok(Bracket { lo: a, hi: b, iterations })
}

/// Locates the switch point of a monotone predicate.
///
/// `pred(lo)` must be true and `pred(hi)` false; the returned bracket keeps
/// that property. Works for noisy but monotone-coupled predicates where only
/// the sign of a comparison is reliable.
pub fn bisect_predicate<T, P>(mut pred: P, lo: T, hi: T, x_tol: T) -> Result<Bracket<T>>
where
    T: Scalar,
    P: FnMut(T) -> Result<bool>,
{
    if !pred(lo)? || pred(hi)? {
        return Err(Error::NotBracketed {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    let (mut a, mut b) = (lo, hi);
    let mut iterations = 0;
    while (b - a).abs() > x_tol {
        let m = T::lit(0.5) * (a + b);
        if m == a || m == b {
            break;
        }
        iterations += 1;
        if pred(m)? {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(Bracket { lo: a, hi: b, iterations })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let b = bisect(|x: f64| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((b.midpoint() - 2f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn rejects_missing_sign_change() {
        assert!(matches!(
            bisect(|x: f64| x * x + 1.0, -1.0, 1.0, 1e-8),
            Err(Error::NotBracketed { .. })
        ));
    }

    #[test]
    fn predicate_switch_point() {
        let b = bisect_predicate(|x: f64| Ok(x < 0.3), 0.0, 1.0, 1e-12).unwrap();
        assert!(b.lo < 0.3 && b.hi >= 0.3 && b.hi - b.lo <= 1e-12);
        // decreasing direction
        let b = bisect_predicate(|x: f64| Ok(x > 0.7), 1.0, 0.0, 1e-12).unwrap();
        assert!((b.midpoint() - 0.7).abs() < 1e-12);
    }
}
