//! Arbitrary-precision reals used wherever 64-bit doubles are too short:
//! the scaling constant α, resonance residuals and the exponentials x_j.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::OnceLock;

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;
use dashu_int::IBig;

use crate::dd::DoubleDouble;
use crate::scalar::Real;

/// Working precision in bits (a little over 60 significant decimal digits).
pub const PRECISION_BITS: usize = 200;

type Big = FBig<HalfEven, 2>;

/// A real number carried at [`PRECISION_BITS`] of binary precision.
#[derive(Clone, PartialEq, PartialOrd)]
pub struct Hp(Big);

fn widen(x: Big) -> Big {
    x.with_precision(PRECISION_BITS).value()
}

impl Hp {
    /// Exact conversion from a double.
    pub fn from_f64(x: f64) -> Hp {
        let b = Big::try_from(x).expect("finite double");
        Hp(widen(b))
    }

    pub fn abs(&self) -> Hp {
        if self.0 < Big::ZERO {
            Hp(-self.0.clone())
        } else {
            self.clone()
        }
    }

    /// Nearest double plus the rounding remainder: roughly 106 significant bits.
    pub fn to_dd(&self) -> DoubleDouble {
        let hi = self.to_f64();
        let lo = (self.clone() - Hp::from_f64(hi)).to_f64();
        DoubleDouble::new(hi, lo)
    }

    /// Decimal rendering with `digits` significant digits.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        self.0
            .clone()
            .with_base_and_precision::<10>(digits)
            .value()
            .to_string()
    }

    pub fn cmp_f64(&self, x: f64) -> Ordering {
        self.partial_cmp(&Hp::from_f64(x))
            .expect("high-precision values are totally ordered")
    }
}

fn pi_cached() -> &'static Hp {
    static PI: OnceLock<Hp> = OnceLock::new();
    PI.get_or_init(|| Hp(Big::pi(PRECISION_BITS)))
}

impl Real for Hp {
    fn from_decimal(text: &str) -> Option<Self> {
        let (mantissa_part, exp_part) = match text.find(['e', 'E']) {
            Some(i) => (&text[..i], Some(&text[i + 1..])),
            None => (text, None),
        };
        let mut exponent: i64 = match exp_part {
            Some(e) => e.parse().ok()?,
            None => 0,
        };
        let (int_digits, frac_digits) = match mantissa_part.find('.') {
            Some(i) => (&mantissa_part[..i], &mantissa_part[i + 1..]),
            None => (mantissa_part, ""),
        };
        if int_digits.is_empty() && frac_digits.is_empty() {
            return None;
        }
        let digits: String = int_digits.chars().chain(frac_digits.chars()).collect();
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        exponent -= frac_digits.len() as i64;
        let mantissa: IBig = digits.parse().ok()?;
        let scale = IBig::from(10u8).pow(exponent.unsigned_abs() as usize);
        let m = widen(Big::from(mantissa));
        let value = if exponent >= 0 {
            m * widen(Big::from(scale))
        } else {
            m / widen(Big::from(scale))
        };
        Some(Hp(value))
    }

    fn from_int(n: i64) -> Self {
        Hp(widen(Big::from(n)))
    }

    fn pi() -> Self {
        pi_cached().clone()
    }

    fn ln(&self) -> Self {
        Hp(self.0.ln())
    }

    fn exp(&self) -> Self {
        Hp(self.0.exp())
    }

    fn sqrt(&self) -> Self {
        Hp(self.0.sqrt())
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64().value()
    }

    fn is_positive(&self) -> bool {
        self.0 > Big::ZERO
    }

    fn is_zero(&self) -> bool {
        self.0 == Big::ZERO
    }
}

impl Add for Hp {
    type Output = Hp;
    fn add(self, rhs: Hp) -> Hp {
        Hp(self.0 + rhs.0)
    }
}

impl Sub for Hp {
    type Output = Hp;
    fn sub(self, rhs: Hp) -> Hp {
        Hp(self.0 - rhs.0)
    }
}

impl Mul for Hp {
    type Output = Hp;
    fn mul(self, rhs: Hp) -> Hp {
        Hp(self.0 * rhs.0)
    }
}

impl Div for Hp {
    type Output = Hp;
    fn div(self, rhs: Hp) -> Hp {
        Hp(self.0 / rhs.0)
    }
}

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp(-self.0)
    }
}

impl fmt::Debug for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hp({})", self.to_decimal_string(45))
    }
}

impl fmt::Display for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string(45))
    }
}
