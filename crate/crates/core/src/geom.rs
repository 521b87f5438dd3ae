//! Plane vectors and points.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub};

/// A vector (or point) in the Euclidean plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Vec2 {
    pub x: f64,
    pub y: f64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0.0, y: 0.0 };

    #[inline]
    pub const fn new(x: f64, y: f64) -> Self {
        Vec2 { x, y }
    }

    #[inline]
    pub fn dot(self, other: Vec2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// z-component of the 3D cross product.
    #[inline]
    pub fn cross(self, other: Vec2) -> f64 {
        self.x * other.y - self.y * other.x
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    #[inline]
    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    /// Anti-clockwise rotation by a right angle: `(x, y) -> (-y, x)`.
    #[inline]
    pub fn rot90(self) -> Vec2 {
        Vec2::new(-self.y, self.x)
    }

    /// Unit vector in the same direction, or `None` for a zero-length vector.
    pub fn normalized(self) -> Option<Vec2> {
        let n = self.norm();
        if n > 0.0 && n.is_finite() {
            Some(self / n)
        } else {
            None
        }
    }

    #[inline]
    pub fn distance(self, other: Vec2) -> f64 {
        (self - other).norm()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    /// Linear interpolation `self + s (other - self)`.
    #[inline]
    pub fn lerp(self, other: Vec2, s: f64) -> Vec2 {
        self + (other - self) * s
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    #[inline]
    fn add(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl AddAssign for Vec2 {
    #[inline]
    fn add_assign(&mut self, rhs: Vec2) {
        self.x += rhs.x;
        self.y += rhs.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    #[inline]
    fn sub(self, rhs: Vec2) -> Vec2 {
        Vec2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    #[inline]
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn mul(self, s: f64) -> Vec2 {
        Vec2::new(self.x * s, self.y * s)
    }
}

impl Mul<Vec2> for f64 {
    type Output = Vec2;
    #[inline]
    fn mul(self, v: Vec2) -> Vec2 {
        v * self
    }
}

impl Div<f64> for Vec2 {
    type Output = Vec2;
    #[inline]
    fn div(self, s: f64) -> Vec2 {
        Vec2::new(self.x / s, self.y / s)
    }
}

/// Second-order finite-difference derivative of samples on a sorted,
/// possibly non-uniform grid: three-point central stencils inside,
/// three-point one-sided stencils at the ends.
pub fn finite_difference<T>(ts: &[f64], values: &[T]) -> Vec<T>
where
    T: Copy + Add<Output = T> + Mul<f64, Output = T>,
{
    assert_eq!(ts.len(), values.len(), "grid and values differ in length");
    let n = values.len();
    let w3 = |a: T, wa: f64, b: T, wb: f64, c: T, wc: f64| a * wa + b * wb + c * wc;
    match n {
        0 => Vec::new(),
        1 => vec![values[0] * 0.0],
        2 => {
            let inv = 1.0 / (ts[1] - ts[0]);
            let d = values[1] * inv + values[0] * (-inv);
            vec![d, d]
        }
        _ => {
            let mut out = Vec::with_capacity(n);
            let (h1, h2) = (ts[1] - ts[0], ts[2] - ts[1]);
            out.push(w3(
                values[0],
                -(2.0 * h1 + h2) / (h1 * (h1 + h2)),
                values[1],
                (h1 + h2) / (h1 * h2),
                values[2],
                -h1 / (h2 * (h1 + h2)),
            ));
            for k in 1..n - 1 {
                let (h1, h2) = (ts[k] - ts[k - 1], ts[k + 1] - ts[k]);
                out.push(w3(
                    values[k - 1],
                    -h2 / (h1 * (h1 + h2)),
                    values[k],
                    (h2 - h1) / (h1 * h2),
                    values[k + 1],
                    h1 / (h2 * (h1 + h2)),
                ));
            }
            let (h1, h2) = (ts[n - 2] - ts[n - 3], ts[n - 1] - ts[n - 2]);
            out.push(w3(
                values[n - 3],
                h2 / (h1 * (h1 + h2)),
                values[n - 2],
                -(h1 + h2) / (h1 * h2),
                values[n - 1],
                (2.0 * h2 + h1) / (h2 * (h1 + h2)),
            ));
            out
        }
    }
}
