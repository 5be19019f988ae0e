//! Scalar abstractions.
//!
//! [`Scalar`] is the bound used by the closed-form density code, which runs
//! unchanged on `f32` and `f64`. [`Real`] is the smaller surface the
//! expression evaluator needs, implemented for the primitive floats and for
//! the arbitrary-precision [`Hp`](crate::hp::Hp).

use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Floating point type usable by the density and bump code.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Shorthand for a lossy conversion from `f64`.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 is representable")
    }

    /// Shorthand for a conversion from an integer.
    #[inline]
    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("i64 is representable")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Field operations plus the handful of transcendental functions the
/// expression language exposes.
pub trait Real:
    Clone
    + Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// Parses an unsigned decimal literal such as `12`, `0.5` or `1.25e-3`.
    fn from_decimal(text: &str) -> Option<Self>;
    fn from_int(n: i64) -> Self;
    fn pi() -> Self;
    fn ln(&self) -> Self;
    fn exp(&self) -> Self;
    fn sqrt(&self) -> Self;
    fn to_f64(&self) -> f64;

    fn is_positive(&self) -> bool {
        self.to_f64() > 0.0
    }

    fn is_zero(&self) -> bool {
        self.to_f64() == 0.0
    }

    /// `self^exponent`; integer exponents use repeated squaring, anything
    /// else goes through `exp(exponent * ln(self))`.
    fn pow(&self, exponent: &Self) -> Self {
        let e = exponent.to_f64();
        if e.fract() == 0.0 && e.abs() <= 64.0 {
            let mut n = e.abs() as u32;
            let mut base = self.clone();
            let mut acc = Self::from_int(1);
            while n > 0 {
                if n & 1 == 1 {
                    acc = acc * base.clone();
                }
                base = base.clone() * base;
                n >>= 1;
            }
            if e < 0.0 {
                Self::from_int(1) / acc
            } else {
                acc
            }
        } else {
            (exponent.clone() * self.ln()).exp()
        }
    }
}

macro_rules! impl_real_for_float {
    ($t:ty) => {
        impl Real for $t {
            fn from_decimal(text: &str) -> Option<Self> {
                text.parse::<$t>().ok()
            }
            fn from_int(n: i64) -> Self {
                n as $t
            }
            fn pi() -> Self {
                <$t as FloatConst>::PI()
            }
            fn ln(&self) -> Self {
                Float::ln(*self)
            }
            fn exp(&self) -> Self {
                Float::exp(*self)
            }
            fn sqrt(&self) -> Self {
                Float::sqrt(*self)
            }
            fn to_f64(&self) -> f64 {
                *self as f64
            }
        }
    };
}

impl_real_for_float!(f32);
impl_real_for_float!(f64);
