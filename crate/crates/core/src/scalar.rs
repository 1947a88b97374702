//! Scalar abstraction: the numerical kernels are generic over the floating
//! point type, with `f64` aliases exported at the crate root.

use std::fmt::{Debug, Display};

/// Floating point scalar the toolkit computes with.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + num_traits::NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Lift an `f64` constant into the scalar type.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Shorthand used throughout the numeric modules.
#[inline]
pub fn sc<S: Scalar>(x: f64) -> S {
    S::of(x)
}

/// 2D point / vector over the scalar type.
#[derive(Clone, Copy, PartialEq, Default)]
pub struct Vec2<S> {
    pub x1: S,
    pub x2: S,
}

impl<S: Scalar> Vec2<S> {
    pub fn new(x1: S, x2: S) -> Self {
        Self { x1, x2 }
    }

    pub fn zero() -> Self {
        Self {
            x1: S::zero(),
            x2: S::zero(),
        }
    }

    pub fn dot(self, o: Self) -> S {
        self.x1 * o.x1 + self.x2 * o.x2
    }

    pub fn norm(self) -> S {
        self.dot(self).sqrt()
    }

    /// Rotate by +90 degrees: (a, b) -> (-b, a).
    pub fn perp(self) -> Self {
        Self {
            x1: -self.x2,
            x2: self.x1,
        }
    }

    /// Mirror across the x1-axis.
    pub fn mirror(self) -> Self {
        Self {
            x1: self.x1,
            x2: -self.x2,
        }
    }

    pub fn scale(self, s: S) -> Self {
        Self {
            x1: self.x1 * s,
            x2: self.x2 * s,
        }
    }
}

impl<S: Scalar> std::ops::Add for Vec2<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x1 + o.x1, self.x2 + o.x2)
    }
}

impl<S: Scalar> std::ops::Sub for Vec2<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x1 - o.x1, self.x2 - o.x2)
    }
}

impl<S: Debug> Debug for Vec2<S> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({:?}, {:?})", self.x1, self.x2)
    }
}

/// 2x2 matrix, row major; used for field gradients d(u_i)/d(x_j).
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct Mat2<S> {
    pub a11: S,
    pub a12: S,
    pub a21: S,
    pub a22: S,
}

impl<S: Scalar> Mat2<S> {
    pub fn zero() -> Self {
        Self {
            a11: S::zero(),
            a12: S::zero(),
            a21: S::zero(),
            a22: S::zero(),
        }
    }

    pub fn frobenius_sq(self) -> S {
        self.a11 * self.a11 + self.a12 * self.a12 + self.a21 * self.a21 + self.a22 * self.a22
    }

    pub fn ddot(self, o: Self) -> S {
        self.a11 * o.a11 + self.a12 * o.a12 + self.a21 * o.a21 + self.a22 * o.a22
    }

    pub fn trace(self) -> S {
        self.a11 + self.a22
    }
}

impl<S: Scalar> std::ops::Add for Mat2<S> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            a11: self.a11 + o.a11,
            a12: self.a12 + o.a12,
            a21: self.a21 + o.a21,
            a22: self.a22 + o.a22,
        }
    }
}
