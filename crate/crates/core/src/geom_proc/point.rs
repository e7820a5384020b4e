use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A location in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point<T = f64> {
    pub x: T,
    pub y: T,
}

impl<T: Scalar> Point<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y }
    }

    pub fn origin() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn polar(r: T, phi: T) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(r * c, r * s)
    }

    pub fn norm(&self) -> T {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(&self) -> T {
        self.x * self.x + self.y * self.y
    }

    pub fn dist(&self, other: &Self) -> T {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn dist_sq(&self, other: &Self) -> T {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl<T: Scalar> std::ops::Add for Point<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl<T: Scalar> std::ops::Sub for Point<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl<T: Scalar> std::ops::Mul<T> for Point<T> {
    type Output = Self;
    fn mul(self, k: T) -> Self {
        Self::new(self.x * k, self.y * k)
    }
}

/// Bounded observation window.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum Window<T = f64> {
    Disc { center: Point<T>, radius: T },
    Square { center: Point<T>, half_side: T },
}

impl<T: Scalar> Window<T> {
    pub fn disc(center: Point<T>, radius: T) -> Result<Self> {
        let w = Window::Disc { center, radius };
        w.validate()?;
        Ok(w)
    }

    pub fn square(center: Point<T>, half_side: T) -> Result<Self> {
        let w = Window::Square { center, half_side };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        let (c, s) = match *self {
            Window::Disc { center, radius } => (center, radius),
            Window::Square { center, half_side } => (center, half_side),
        };
        if !c.is_finite() || !(s > T::zero()) || !s.is_finite() {
            return Err(Error::DegenerateWindow(format!("{self:?}")));
        }
        Ok(())
    }

    pub fn center(&self) -> Point<T> {
        match *self {
            Window::Disc { center, .. } | Window::Square { center, .. } => center,
        }
    }

    pub fn area(&self) -> T {
        match *self {
            Window::Disc { radius, .. } => T::PI() * radius * radius,
            Window::Square { half_side, .. } => T::lit(4.0) * half_side * half_side,
        }
    }

    /// Radius of the smallest disc about the center that covers the window.
    pub fn circumradius(&self) -> T {
        match *self {
            Window::Disc { radius, .. } => radius,
            Window::Square { half_side, .. } => half_side * T::SQRT_2(),
        }
    }

    pub fn contains(&self, p: &Point<T>) -> bool {
        match *self {
            Window::Disc { center, radius } => p.dist_sq(&center) <= radius * radius,
            Window::Square { center, half_side } => {
                (p.x - center.x).abs() <= half_side && (p.y - center.y).abs() <= half_side
            }
        }
    }

    /// Distance from an interior point to the window boundary.
    pub fn boundary_distance(&self, p: &Point<T>) -> T {
        match *self {
            Window::Disc { center, radius } => radius - p.dist(&center),
            Window::Square { center, half_side } => {
                half_side - (p.x - center.x).abs().max((p.y - center.y).abs())
            }
        }
    }

    /// Same shape with its size enlarged by `pad` on every side.
    pub fn padded(&self, pad: T) -> Self {
        match *self {
            Window::Disc { center, radius } => Window::Disc {
                center,
                radius: radius + pad,
            },
            Window::Square { center, half_side } => Window::Square {
                center,
                half_side: half_side + pad,
            },
        }
    }

    /// Lower-left and upper-right corners of the bounding box.
    pub fn bounding_box(&self) -> (Point<T>, Point<T>) {
        let c = self.center();
        let h = match *self {
            Window::Disc { radius, .. } => radius,
            Window::Square { half_side, .. } => half_side,
        };
        (Point::new(c.x - h, c.y - h), Point::new(c.x + h, c.y + h))
    }
}

impl Window<f64> {
    /// Uniform location inside the window.
    pub fn sample_uniform<R: rand::Rng + ?Sized>(&self, rng: &mut R) -> Point {
        match *self {
            Window::Disc { center, radius } => loop {
                // rejection from the bounding square avoids trigonometry
                let x = 2.0 * rng.random::<f64>() - 1.0;
                let y = 2.0 * rng.random::<f64>() - 1.0;
                if x * x + y * y < 1.0 {
                    break Point::new(center.x + radius * x, center.y + radius * y);
                }
            },
            Window::Square { center, half_side } => Point::new(
                center.x + half_side * (2.0 * rng.random::<f64>() - 1.0),
                center.y + half_side * (2.0 * rng.random::<f64>() - 1.0),
            ),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream_rng;

    #[test]
    fn areas_and_containment() {
        let d = Window::disc(Point::new(1.0, 0.0), 2.0).unwrap();
        assert!((d.area() - 4.0 * std::f64::consts::PI).abs() < 1e-14);
        assert!(d.contains(&Point::new(2.9, 0.0)));
        assert!(!d.contains(&Point::new(-1.1, 0.0)));
        let s = Window::square(Point::origin(), 0.5_f32).unwrap();
        assert_eq!(s.area(), 1.0);
        assert!(Window::disc(Point::origin(), 0.0).is_err());
    }

    #[test]
    fn uniform_samples_stay_inside() {
        let mut rng = stream_rng(3, 0);
        let w = Window::square(Point::new(5.0, -2.0), 1.5).unwrap();
        for _ in 0..1000 {
            let p = w.sample_uniform(&mut rng);
            assert!(w.contains(&p));
            assert!(w.boundary_distance(&p) >= 0.0);
        }
    }
}
