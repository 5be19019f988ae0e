//! The limiting density g_α of the fractional parts and the quantities
//! derived from it.
//!
//! For resonant α = a·log p/(2πq), with P = p^{a/2}, L = log p and r = 1/P,
//!
//! ```text
//! g(t) = −(L/π) Σ_{k≥1} r^k cos(2πqkt) = −L(P cos 2πqt − 1) / (π(P² − 2P cos 2πqt + 1)),
//! ```
//!
//! and g ≡ 0 for every other α. Everything here is generic over the float
//! type; closed-form constants are evaluated in high precision first.

use num_complex::Complex;
use serde::Serialize;

use crate::alpha::{is_prime, AlphaClass, Verdict};
use crate::error::{Error, Result};
use crate::hp::Hp;
use crate::scalar::{Real, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum ModelKind {
    Trivial,
    Resonant { p: u64, a: u64, q: u64 },
}

#[derive(Debug, Clone, Copy)]
pub struct DensityModel<F> {
    kind: ModelKind,
    log_p: F,
    /// p^{-a/2}
    r: F,
    /// p^{a/2}
    big_p: F,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl<F: Scalar> DensityModel<F> {
    pub fn trivial() -> Self {
        DensityModel {
            kind: ModelKind::Trivial,
            log_p: F::zero(),
            r: F::zero(),
            big_p: F::zero(),
        }
    }

    pub fn resonant(p: u64, a: u64, q: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if a == 0 || q == 0 || gcd(a, q) != 1 {
            return Err(Error::Domain(format!("need a, q >= 1 with gcd(a, q) = 1, got a={a}, q={q}")));
        }
        let log_p = Hp::from_int(p as i64).ln();
        let half_a = Hp::from_int(a as i64) / Hp::from_int(2);
        let big_p = (half_a * log_p.clone()).exp();
        let r = Hp::from_int(1) / big_p.clone();
        Ok(DensityModel {
            kind: ModelKind::Resonant { p, a, q },
            log_p: F::lit(log_p.to_f64()),
            r: F::lit(r.to_f64()),
            big_p: F::lit(big_p.to_f64()),
        })
    }

    /// The model implied by a classification verdict.
    pub fn from_class(class: &AlphaClass) -> Result<Self> {
        match class.verdict {
            Verdict::Resonant { p, a, q } => Self::resonant(p, a, q),
            Verdict::Generic => Ok(Self::trivial()),
        }
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn log_p(&self) -> F {
        self.log_p
    }

    pub fn r(&self) -> F {
        self.r
    }

    pub fn q(&self) -> u64 {
        match self.kind {
            ModelKind::Resonant { q, .. } => q,
            ModelKind::Trivial => 1,
        }
    }

    fn qf(&self) -> F {
        F::int(self.q() as i64)
    }

    fn require_resonant(&self, what: &str) -> Result<()> {
        match self.kind {
            ModelKind::Trivial => Err(Error::Domain(format!("{what} is undefined for the trivial model"))),
            ModelKind::Resonant { .. } => Ok(()),
        }
    }

    /// Closed form of the density.
    pub fn g(&self, t: F) -> F {
        if self.kind == ModelKind::Trivial {
            return F::zero();
        }
        let c = (F::TAU() * self.qf() * t).cos();
        let p = self.big_p;
        -(p * c - F::one()) * self.log_p / (F::PI() * (p * p - F::lit(2.0) * p * c + F::one()))
    }

    /// Partial sum of the Fourier series with `k_terms` terms.
    pub fn g_series(&self, t: F, k_terms: usize) -> F {
        if self.kind == ModelKind::Trivial {
            return F::zero();
        }
        let mut sum = F::zero();
        let mut rk = F::one();
        for k in 1..=k_terms {
            rk *= self.r;
            sum += rk * (F::TAU() * self.qf() * F::int(k as i64) * t).cos();
        }
        -self.log_p / F::PI() * sum
    }

    /// Bound on `|g − g_series(K)|`.
    pub fn series_tail_bound(&self, k_terms: usize) -> F {
        if self.kind == ModelKind::Trivial {
            return F::zero();
        }
        self.log_p / F::PI() * self.r.powi(k_terms as i32 + 1) / (F::one() - self.r)
    }

    /// Global minimum `−L/(π(P − 1))`, attained at `t = k/q`.
    pub fn g_min(&self) -> Result<F> {
        self.require_resonant("g_min")?;
        Ok(-self.log_p / (F::PI() * (self.big_p - F::one())))
    }

    /// `∫₀^y g`, via `−(L/(2π²q))·arg(1 − r e^{−2πiqy})`.
    pub fn cumulative_g(&self, y: F) -> F {
        if self.kind == ModelKind::Trivial {
            return F::zero();
        }
        let theta = F::TAU() * self.qf() * y;
        let re = F::one() - self.r * theta.cos();
        let im = self.r * theta.sin();
        // 1 − r e^{−iθ} stays in the right half plane because r < 1
        assert!(re > F::zero(), "principal branch left the right half plane");
        -self.log_p / (F::lit(2.0) * F::PI() * F::PI() * self.qf()) * im.atan2(re)
    }

    /// Fourier coefficient `ĝ(m) = ∫ g(t) e^{−2πimt} dt`.
    pub fn fourier_coeff(&self, m: i64) -> Complex<F> {
        let q = self.q() as i64;
        if self.kind == ModelKind::Trivial || m == 0 || m % q != 0 {
            return Complex::new(F::zero(), F::zero());
        }
        let k = (m / q).unsigned_abs() as i32;
        Complex::new(-self.log_p / (F::TAU() * self.big_p.powi(k)), F::zero())
    }

    /// `g′(t) = 2qL·P(P² − 1) sin θ / D²` with θ = 2πqt, D = P² − 2P cos θ + 1.
    pub fn g_prime(&self, t: F) -> F {
        if self.kind == ModelKind::Trivial {
            return F::zero();
        }
        let theta = F::TAU() * self.qf() * t;
        let p = self.big_p;
        let d = p * p - F::lit(2.0) * p * theta.cos() + F::one();
        F::lit(2.0) * self.qf() * self.log_p * p * (p * p - F::one()) * theta.sin() / (d * d)
    }

    /// `∫g²`, `max|g′|` and their ratio `B`.
    pub fn b_constant(&self) -> Result<BConstant<F>> {
        self.require_resonant("B")?;
        let ModelKind::Resonant { p, a, .. } = self.kind else {
            unreachable!()
        };
        // Parseval: 2 Σ_k (L/(2π))² p^{−ak} = L²/(2π²(p^a − 1))
        let l = Hp::from_int(p as i64).ln();
        let pa = Hp::from_int(p as i64).pow(&Hp::from_int(a as i64));
        let two_pi2 = Hp::from_int(2) * Hp::pi() * Hp::pi();
        let closed = l.clone() * l / (two_pi2 * (pa - Hp::from_int(1)));
        let integral_g_sq = F::lit(closed.to_f64());

        // g is a trigonometric polynomial up to a geometric tail, so the
        // periodic trapezoid rule converges geometrically
        let n = 4096 * self.q() as usize;
        let h = F::one() / F::int(n as i64);
        let mut quad = F::zero();
        for i in 0..n {
            let v = self.g(F::int(i as i64) * h);
            quad += v * v;
        }
        let integral_g_sq_quadrature = quad * h;

        let max_abs_g_prime = self.max_abs_g_prime();
        Ok(BConstant {
            integral_g_sq,
            integral_g_sq_quadrature,
            max_abs_g_prime,
            b: integral_g_sq / max_abs_g_prime,
        })
    }

    /// Dense sampling over one period followed by golden-section refinement.
    pub fn max_abs_g_prime(&self) -> F {
        if self.kind == ModelKind::Trivial {
            return F::zero();
        }
        let q = self.qf();
        let n = 4096usize;
        let step = F::one() / (q * F::int(n as i64));
        let f = |t: F| self.g_prime(t).abs();
        let (mut best_i, mut best_v) = (0usize, F::zero());
        for i in 0..n {
            let v = f(F::int(i as i64) * step);
            if v > best_v {
                best_i = i;
                best_v = v;
            }
        }
        let center = F::int(best_i as i64) * step;
        let (mut lo, mut hi) = (center - step, center + step);
        let inv_phi = (F::lit(5.0).sqrt() - F::one()) / F::lit(2.0);
        let mut x1 = hi - inv_phi * (hi - lo);
        let mut x2 = lo + inv_phi * (hi - lo);
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..200 {
            if hi - lo <= F::epsilon() * (F::one() + center.abs()) {
                break;
            }
            if f1 < f2 {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + inv_phi * (hi - lo);
                f2 = f(x2);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - inv_phi * (hi - lo);
                f1 = f(x1);
            }
        }
        best_v.max(f1).max(f2)
    }

    /// `(L/(πq))·arcsin(r)/log T`, the conjectured leading term of `D*(T)`.
    pub fn predicted_discrepancy(&self, t_height: F) -> Result<DiscrepancyPrediction<F>> {
        if !(t_height > F::one().exp()) {
            return Err(Error::Domain(format!("predicted discrepancy needs T > e, got {t_height}")));
        }
        if self.kind == ModelKind::Trivial {
            return Ok(DiscrepancyPrediction {
                constant: F::zero(),
                value: F::zero(),
                little_o: true,
            });
        }
        let constant = self.log_p / (F::PI() * self.qf()) * self.r.asin();
        Ok(DiscrepancyPrediction {
            constant,
            value: constant / t_height.ln(),
            little_o: false,
        })
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BConstant<F> {
    pub integral_g_sq: F,
    pub integral_g_sq_quadrature: F,
    pub max_abs_g_prime: F,
    #[serde(rename = "B")]
    pub b: F,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct DiscrepancyPrediction<F> {
    /// Coefficient of `1/log T`.
    pub constant: F,
    pub value: F,
    /// True for the trivial model, where only `o(1/log T)` is known.
    pub little_o: bool,
}
