//! The scaling constant α: parsing, resonance classification and the
//! quantities x_j = e^{2πjα} and Λ(n_x) that enter the Landau formula.

pub mod expr;
pub mod primes;

use std::sync::OnceLock;

use serde::{Serialize, Serializer};

use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::hp::Hp;
use crate::scalar::Real;

pub use expr::Expr;
pub use primes::{is_prime, prime_power_base, von_mangoldt, PrimePowerNeighbor};

/// A positive scaling constant carried in high precision.
#[derive(Debug, Clone)]
pub struct AlphaSpec {
    value: Hp,
    dd: DoubleDouble,
    expr: Option<String>,
}

impl AlphaSpec {
    pub fn from_hp(value: Hp, expr: Option<String>) -> Result<Self> {
        if !value.is_positive() {
            return Err(Error::NonPositive(value.to_f64()));
        }
        Ok(AlphaSpec {
            dd: value.to_dd(),
            value,
            expr,
        })
    }

    pub fn value(&self) -> &Hp {
        &self.value
    }

    pub fn as_f64(&self) -> f64 {
        self.dd.hi
    }

    pub fn as_dd(&self) -> DoubleDouble {
        self.dd
    }

    pub fn expr(&self) -> Option<&str> {
        self.expr.as_deref()
    }
}

impl Serialize for AlphaSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("AlphaSpec", 3)?;
        st.serialize_field("expr", &self.expr)?;
        st.serialize_field("value", &self.value.to_decimal_string(45))?;
        st.serialize_field("f64", &self.dd.hi)?;
        st.end()
    }
}

/// Evaluates an expression such as `log(2)/(2*pi)` to a positive α.
pub fn parse_alpha(text: &str) -> Result<AlphaSpec> {
    let e = Expr::parse(text)?;
    if let Some(v) = e.variables().first() {
        return Err(Error::Domain(format!("α may not contain the variable {v:?}")));
    }
    let value: Hp = e.eval(&[])?;
    AlphaSpec::from_hp(value, Some(text.trim().to_string()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SearchBounds {
    pub p_max: u64,
    pub a_max: u64,
    pub q_max: u64,
    pub tol: f64,
}

impl Default for SearchBounds {
    fn default() -> Self {
        SearchBounds {
            p_max: 1000,
            a_max: 100,
            q_max: 100,
            tol: 1e-20,
        }
    }
}

impl SearchBounds {
    pub fn validate(&self) -> Result<()> {
        if self.p_max < 2 || self.a_max < 1 || self.q_max < 1 {
            return Err(Error::Config(format!(
                "search bounds must be at least p_max=2, a_max=1, q_max=1, got {self:?}"
            )));
        }
        if !(self.tol > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    Resonant { p: u64, a: u64, q: u64 },
    /// No resonance within the search bounds and tolerance. This is a
    /// statement about the bounded search only.
    Generic,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaClass {
    #[serde(flatten)]
    pub verdict: Verdict,
    /// `|α − a·log p/(2πq)|` for the best candidate found.
    pub residual: f64,
    /// The best candidate, also reported when the verdict is generic.
    pub best: Option<(u64, u64, u64)>,
    pub bounds: SearchBounds,
}

impl AlphaClass {
    pub fn is_resonant(&self) -> bool {
        matches!(self.verdict, Verdict::Resonant { .. })
    }
}

/// `log p` at working precision for primes up to 1000, computed once.
fn log_table() -> &'static [(u64, Hp)] {
    static TABLE: OnceLock<Vec<(u64, Hp)>> = OnceLock::new();
    TABLE.get_or_init(|| {
        primes::primes_upto(1000)
            .into_iter()
            .map(|p| (p, Hp::from_int(p as i64).ln()))
            .collect()
    })
}

fn log_prime(p: u64) -> Hp {
    match log_table().binary_search_by_key(&p, |(q, _)| *q) {
        Ok(i) => log_table()[i].1.clone(),
        Err(_) => Hp::from_int(p as i64).ln(),
    }
}

/// Continued-fraction convergents `a/q` of `beta` with `1 <= a <= a_max`
/// and `q <= q_max`.
fn convergents(beta: f64, a_max: u64, q_max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let (mut h0, mut h1) = (1u128, beta.floor() as u128);
    let (mut k0, mut k1) = (0u128, 1u128);
    let mut x = beta;
    loop {
        if k1 > q_max as u128 || h1 > a_max as u128 * 4 + 4 {
            break;
        }
        if h1 >= 1 && h1 <= a_max as u128 {
            out.push((h1 as u64, k1 as u64));
        }
        let frac = x - x.floor();
        if frac < 1e-15 {
            break;
        }
        x = 1.0 / frac;
        let c = x.floor() as u128;
        let (h2, k2) = (c * h1 + h0, c * k1 + k0);
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
    }
    out
}

/// Searches for `α = a·log p/(2πq)` with `p` prime and `a/q` reduced.
///
/// Candidates come from the convergents of `2πα/log p`, screened in double
/// precision; anything close enough to matter is re-evaluated at working
/// precision before being compared against `bounds.tol`.
pub fn classify_alpha(alpha: &AlphaSpec, bounds: SearchBounds) -> Result<AlphaClass> {
    bounds.validate()?;
    let two_pi_hp = Hp::from_int(2) * Hp::pi();
    let alpha_f = alpha.as_f64();
    let two_pi_alpha = std::f64::consts::TAU * alpha_f;

    // (f64 residual, p, a, q)
    let mut screened: Vec<(f64, u64, u64, u64)> = Vec::new();
    for p in primes::primes_upto(bounds.p_max) {
        let lp = (p as f64).ln();
        let beta = two_pi_alpha / lp;
        for (a, q) in convergents(beta, bounds.a_max, bounds.q_max) {
            let r = (alpha_f - a as f64 * lp / (std::f64::consts::TAU * q as f64)).abs();
            screened.push((r, p, a, q));
        }
    }
    if screened.is_empty() {
        return Ok(AlphaClass {
            verdict: Verdict::Generic,
            residual: f64::INFINITY,
            best: None,
            bounds,
        });
    }
    // double rounding of the candidate costs a few ulps of α
    let screen = 64.0 * f64::EPSILON * alpha_f + bounds.tol;
    let min_f = screened.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
    let mut best: Option<(f64, u64, u64, u64)> = None;
    for &(r, p, a, q) in &screened {
        if r > screen && r > min_f {
            continue;
        }
        let cand = Hp::from_int(a as i64) * log_prime(p) / (two_pi_hp.clone() * Hp::from_int(q as i64));
        let residual = (alpha.value().clone() - cand).abs().to_f64();
        let better = match best {
            None => true,
            Some((br, bp, _, bq)) => residual < br || (residual == br && (p, q) < (bp, bq)),
        };
        if better {
            best = Some((residual, p, a, q));
        }
    }
    let (residual, p, a, q) = best.expect("at least one candidate");
    let verdict = if residual <= bounds.tol {
        Verdict::Resonant { p, a, q }
    } else {
        Verdict::Generic
    };
    Ok(AlphaClass {
        verdict,
        residual,
        best: Some((p, a, q)),
        bounds,
    })
}

/// `x_j = e^{2πjα}`.
#[derive(Debug, Clone)]
pub struct XValue {
    pub value: Hp,
    /// Set when the double-precision mirror would overflow (`2πjα > 700`).
    pub overflow: bool,
}

impl XValue {
    /// The double mirror, or `None` past the overflow guard.
    pub fn as_f64(&self) -> Option<f64> {
        (!self.overflow).then(|| self.value.to_f64())
    }
}

pub fn x_j(alpha: &AlphaSpec, j: i64) -> Result<XValue> {
    if j < 1 {
        return Err(Error::Domain(format!("x_j needs j >= 1, got {j}")));
    }
    let exponent = Hp::from_int(2) * Hp::pi() * Hp::from_int(j) * alpha.value().clone();
    Ok(XValue {
        overflow: exponent.to_f64() > 700.0,
        value: exponent.exp(),
    })
}
