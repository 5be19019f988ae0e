//! Minimal double-double arithmetic for phase reduction.
//!
//! Only what `{x·γ}` style reductions need: exact sums and products of
//! doubles, double-double times double, and the fractional part.

use std::ops::{Add, Mul, Neg, Sub};

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl DoubleDouble {
    pub const ZERO: DoubleDouble = DoubleDouble { hi: 0.0, lo: 0.0 };

    #[inline]
    pub const fn new(hi: f64, lo: f64) -> Self {
        DoubleDouble { hi, lo }
    }

    #[inline]
    pub const fn from_f64(x: f64) -> Self {
        DoubleDouble { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn mul_f64(self, b: f64) -> Self {
        let (p, e) = two_prod(self.hi, b);
        let e = self.lo.mul_add(b, e);
        let (hi, lo) = fast_two_sum(p, e);
        DoubleDouble { hi, lo }
    }

    /// Fractional part in `[0, 1)`, keeping full double-double accuracy.
    pub fn fract(self) -> Self {
        let fh = self.hi.floor();
        // hi - floor(hi) is exact for |hi| < 2^52
        let (mut hi, mut lo) = fast_two_sum(self.hi - fh, self.lo);
        if hi < 0.0 || (hi == 0.0 && lo < 0.0) {
            let (h, l) = two_sum(hi, 1.0);
            let (h, l2) = fast_two_sum(h, l + lo);
            hi = h;
            lo = l2;
        } else if hi >= 1.0 {
            let (h, l) = two_sum(hi, -1.0);
            let (h, l2) = fast_two_sum(h, l + lo);
            hi = h;
            lo = l2;
        }
        DoubleDouble { hi, lo }
    }

    /// Fractional part rounded to a double in `[0, 1)`.
    pub fn fract_f64(self) -> f64 {
        let f = self.fract().to_f64();
        if f >= 1.0 {
            0.0
        } else {
            f
        }
    }
}

impl Add for DoubleDouble {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        DoubleDouble { hi, lo }
    }
}

impl Neg for DoubleDouble {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        DoubleDouble {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for DoubleDouble {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for DoubleDouble {
    type Output = Self;
    #[inline]
    fn mul(self, rhs: Self) -> Self {
        let (p, e) = two_prod(self.hi, rhs.hi);
        let e = self.hi.mul_add(rhs.lo, self.lo.mul_add(rhs.hi, e));
        let (hi, lo) = fast_two_sum(p, e);
        DoubleDouble { hi, lo }
    }
}
