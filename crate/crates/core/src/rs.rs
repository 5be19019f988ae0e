//! Zeros of ζ on the critical line from scratch: the Riemann-Siegel Z
//! function, Gram points, and sign-change bracketing.
//!
//! Above `low_t_cutoff` Z is evaluated with the Riemann-Siegel main sum plus
//! up to five Gabcke correction terms; below it ζ(1/2+it) comes from
//! Euler-Maclaurin summation and Z = Re(e^{iθ} ζ). The asymptotic series
//! only reaches 1e-8 near t = 200 even with C₄, hence the default cutoff.

use std::f64::consts::PI;
use std::sync::OnceLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::zeros::{rvm_main_term, Provenance, ZeroList};

/// Smallest height at which `theta` and `z` are evaluated.
pub const MIN_HEIGHT: f64 = 9.0;

const MAX_SUBDIVISIONS: usize = 64;
const MAX_WIDENINGS: usize = 8;
const EM_MIN_TERMS: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EngineConfig {
    pub target_accuracy: f64,
    pub max_height: f64,
    /// Number of correction terms beyond C₀ (0..=4).
    pub correction_order: u8,
    pub low_t_cutoff: f64,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            target_accuracy: 1e-8,
            max_height: 1e5,
            correction_order: 4,
            low_t_cutoff: 200.0,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1e-12..=1e-4).contains(&self.target_accuracy) {
            return Err(Error::Config(format!(
                "target_accuracy {} outside [1e-12, 1e-4]",
                self.target_accuracy
            )));
        }
        if !(self.max_height > MIN_HEIGHT && self.max_height <= 1e5) {
            return Err(Error::Config(format!(
                "max_height {} outside ({MIN_HEIGHT}, 1e5]",
                self.max_height
            )));
        }
        if self.correction_order > 4 {
            return Err(Error::Config(format!(
                "correction_order {} exceeds 4",
                self.correction_order
            )));
        }
        if !(self.low_t_cutoff >= MIN_HEIGHT && self.low_t_cutoff <= 1000.0) {
            return Err(Error::Config(format!(
                "low_t_cutoff {} outside [{MIN_HEIGHT}, 1000]",
                self.low_t_cutoff
            )));
        }
        Ok(())
    }

    fn describe(&self) -> String {
        format!(
            "riemann-siegel(order={},cutoff={},accuracy={})",
            self.correction_order, self.low_t_cutoff, self.target_accuracy
        )
    }
}

/// A Gram point: the solution of θ(g) = nπ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GramIndex {
    pub n: i64,
    pub g: f64,
}

/// Riemann-Siegel theta function (asymptotic expansion).
pub fn theta(t: f64) -> Result<f64> {
    if !(t >= MIN_HEIGHT) {
        return Err(Error::Domain(format!("theta needs t >= {MIN_HEIGHT}, got {t}")));
    }
    Ok(theta_unchecked(t))
}

fn theta_unchecked(t: f64) -> f64 {
    let u = 1.0 / t;
    let u2 = u * u;
    let tail = u
        * (1.0 / 48.0
            + u2 * (7.0 / 5760.0
                + u2 * (31.0 / 80640.0 + u2 * (127.0 / 430080.0 + u2 * (511.0 / 1216512.0)))));
    0.5 * t * (t / (2.0 * PI)).ln() - 0.5 * t - PI / 8.0 + tail
}

fn theta_prime(t: f64) -> f64 {
    0.5 * (t / (2.0 * PI)).ln() - 1.0 / (48.0 * t * t)
}

/// Taylor coefficients of Ψ(1/2 + w) = cos(2π(p² - p - 1/16)) / cos(2πp)
/// about w = 0, by the trapezoid rule on the Cauchy integral over |w| = 1.
/// Ψ is entire, so the rule converges geometrically.
fn psi_taylor(degree: usize) -> Vec<f64> {
    const NODES: usize = 256;
    let values: Vec<Complex64> = (0..NODES)
        .map(|k| {
            let w = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / NODES as f64);
            let num = ((w * w - 5.0 / 16.0) * (2.0 * PI)).cos();
            let den = -((w * 2.0 * PI).cos());
            num / den
        })
        .collect();
    (0..=degree)
        .map(|n| {
            let s: Complex64 = values
                .iter()
                .enumerate()
                .map(|(k, v)| {
                    v * Complex64::from_polar(1.0, -2.0 * PI * (n * k) as f64 / NODES as f64)
                })
                .sum();
            s.re / NODES as f64
        })
        .collect()
}

fn derivative(poly: &[f64], order: usize) -> Vec<f64> {
    (order..poly.len())
        .map(|n| {
            let falling: f64 = ((n - order + 1)..=n).map(|i| i as f64).product();
            poly[n] * falling
        })
        .collect()
}

fn axpy(acc: &mut [f64], scale: f64, poly: &[f64]) {
    for (a, p) in acc.iter_mut().zip(poly) {
        *a += scale * p;
    }
}

/// Power series in w = p - 1/2 for the correction terms C₀..C₄.
fn corrections() -> &'static [Vec<f64>; 5] {
    static TABLE: OnceLock<[Vec<f64>; 5]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let psi = psi_taylor(72);
        let d = |k: usize| derivative(&psi, k);
        let (p2, p4, p6, p8) = (PI * PI, PI.powi(4), PI.powi(6), PI.powi(8));
        let len = psi.len();
        let mut c = [
            psi.clone(),
            vec![0.0; len],
            vec![0.0; len],
            vec![0.0; len],
            vec![0.0; len],
        ];
        axpy(&mut c[1], -1.0 / (96.0 * p2), &d(3));
        axpy(&mut c[2], 1.0 / (64.0 * p2), &d(2));
        axpy(&mut c[2], 1.0 / (18432.0 * p4), &d(6));
        axpy(&mut c[3], -1.0 / (64.0 * p2), &d(1));
        axpy(&mut c[3], -1.0 / (3840.0 * p4), &d(5));
        axpy(&mut c[3], -1.0 / (5308416.0 * p6), &d(9));
        axpy(&mut c[4], 1.0 / (128.0 * p2), &psi);
        axpy(&mut c[4], 19.0 / (24576.0 * p4), &d(4));
        axpy(&mut c[4], 11.0 / (5898240.0 * p6), &d(8));
        axpy(&mut c[4], 1.0 / (2038431744.0 * p8), &d(12));
        for poly in c.iter_mut() {
            // beyond degree 48 the terms are below 1e-30 on |w| <= 1/2
            poly.truncate(48);
        }
        c
    })
}

fn horner(poly: &[f64], w: f64) -> f64 {
    poly.iter().rev().fold(0.0, |acc, &c| acc * w + c)
}

/// Riemann-Siegel correction term C_k(p) for `p` in [0, 1).
pub fn correction(k: usize, p: f64) -> f64 {
    horner(&corrections()[k], p - 0.5)
}

const BERNOULLI_OVER_FACTORIAL: [f64; 10] = [
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 24.0,
    1.0 / 42.0 / 720.0,
    -1.0 / 30.0 / 40320.0,
    5.0 / 66.0 / 3628800.0,
    -691.0 / 2730.0 / 479001600.0,
    7.0 / 6.0 / 87178291200.0,
    -3617.0 / 510.0 / 20922789888000.0,
    43867.0 / 798.0 / 6402373705728000.0,
    -174611.0 / 330.0 / 2432902008176640000.0,
];

/// ζ(s) by Euler-Maclaurin summation. The number of direct terms grows
/// with Im(s) so that ten Bernoulli corrections stay below 1e-11.
fn zeta_em(s: Complex64) -> Complex64 {
    let terms = EM_MIN_TERMS + (0.5 * s.im.abs()).ceil() as usize;
    let n = terms as f64;
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..terms {
        sum += (-s * (k as f64).ln()).exp();
    }
    let n_pow = (-s * n.ln()).exp(); // N^{-s}
    sum += n_pow * n / (s - 1.0) + n_pow * 0.5;
    // Σ B_2k/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1}
    let mut rising = s; // s(s+1)…(s+2k-2)
    let mut power = n_pow / n; // N^{-s-2k+1}
    for (k, coeff) in BERNOULLI_OVER_FACTORIAL.iter().enumerate() {
        if k > 0 {
            let j = (2 * k) as f64;
            rising = rising * (s + (j - 1.0)) * (s + j);
            power /= n * n;
        }
        sum += rising * power * *coeff;
    }
    sum
}

/// Evaluates θ, Z and Gram points, and finds zeros.
#[derive(Debug, Clone)]
pub struct RsEngine {
    config: EngineConfig,
    log_n: Vec<f64>,
    inv_sqrt_n: Vec<f64>,
}

impl RsEngine {
    pub fn new(config: EngineConfig) -> Result<Self> {
        config.validate()?;
        let terms = (config.max_height / (2.0 * PI)).sqrt().floor() as usize + 2;
        let log_n = (0..=terms).map(|n| (n.max(1) as f64).ln()).collect();
        let inv_sqrt_n = (0..=terms).map(|n| 1.0 / (n.max(1) as f64).sqrt()).collect();
        // warm the correction table outside any parallel section
        let _ = corrections();
        Ok(RsEngine {
            config,
            log_n,
            inv_sqrt_n,
        })
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    fn check_height(&self, t: f64) -> Result<()> {
        if !(t >= MIN_HEIGHT && t <= self.config.max_height) {
            return Err(Error::Domain(format!(
                "height {t} outside [{MIN_HEIGHT}, {}]",
                self.config.max_height
            )));
        }
        Ok(())
    }

    pub fn theta(&self, t: f64) -> Result<f64> {
        theta(t)
    }

    /// Hardy's Z function.
    pub fn z(&self, t: f64) -> Result<f64> {
        self.check_height(t)?;
        Ok(self.z_unchecked(t))
    }

    fn z_unchecked(&self, t: f64) -> f64 {
        if t < self.config.low_t_cutoff {
            self.z_euler_maclaurin(t).re
        } else {
            self.z_riemann_siegel(t)
        }
    }

    /// e^{iθ(t)} ζ(1/2 + it); the imaginary part is a realness residue.
    pub fn z_euler_maclaurin(&self, t: f64) -> Complex64 {
        let zeta = zeta_em(Complex64::new(0.5, t));
        Complex64::from_polar(1.0, theta_unchecked(t)) * zeta
    }

    fn z_riemann_siegel(&self, t: f64) -> f64 {
        let a = (t / (2.0 * PI)).sqrt();
        let m = a.floor();
        let p = a - m;
        let m = m as usize;
        let th = theta_unchecked(t);
        let mut sum = 0.0;
        for n in 1..=m {
            sum += self.inv_sqrt_n[n] * (th - t * self.log_n[n]).cos();
        }
        let w = p - 0.5;
        let table = corrections();
        let inv_a = 1.0 / a;
        let mut rem = 0.0;
        let mut scale = 1.0;
        for poly in table.iter().take(self.config.correction_order as usize + 1) {
            rem += scale * horner(poly, w);
            scale *= inv_a;
        }
        let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
        2.0 * sum + sign * rem / a.sqrt()
    }

    /// Gram point g_n by Newton iteration on θ(t) = nπ, for n >= -1.
    pub fn gram_point(&self, n: i64) -> Result<GramIndex> {
        if n < -1 {
            return Err(Error::Domain(format!("gram index {n} < -1")));
        }
        let seed = if n <= 0 {
            if n == 0 {
                18.0
            } else {
                10.0
            }
        } else {
            let nf = n as f64;
            2.0 * PI * nf / (nf + 2.0).ln() + 20.0
        };
        self.gram_from(n, seed)
    }

    fn gram_from(&self, n: i64, seed: f64) -> Result<GramIndex> {
        let target = n as f64 * PI;
        let mut t = seed.max(2.0 * PI + 1.0);
        for _ in 0..50 {
            let f = theta_unchecked(t) - target;
            let step = f / theta_prime(t);
            let mut next = t - step;
            if next <= 2.0 * PI {
                next = 0.5 * (t + 2.0 * PI);
            }
            if (next - t).abs() <= 1e-13 * t {
                return Ok(GramIndex { n, g: next });
            }
            t = next;
        }
        Err(Error::NonConvergence(format!("gram point {n} after 50 Newton steps")))
    }

    /// The first `how_many` zero ordinates, each to within `target_accuracy`.
    pub fn find_zeros(&self, how_many: usize) -> Result<ZeroList> {
        if how_many == 0 {
            return Err(Error::Domain("how_many must be at least 1".into()));
        }
        let brackets = self.bracket_zeros(how_many)?;
        let acc = self.config.target_accuracy;
        let ordinates: Vec<f64> = brackets
            .par_iter()
            .map(|b| self.bisect(*b, acc))
            .collect();
        let last = *ordinates.last().expect("how_many >= 1");
        let main = rvm_main_term(last)?;
        if (how_many as f64 - main).abs() > 2.0 * last.ln() {
            return Err(Error::CountMismatch {
                height: last,
                found: how_many,
                expected: main.round().max(0.0) as usize,
            });
        }
        ZeroList::from_ordinates(ordinates, Provenance::Computed(self.config.describe()), acc)
    }

    /// Sign-change brackets for the first `how_many` zeros, found block by
    /// block between "good" Gram points, i.e. those with (-1)^n Z(g_n) > 0.
    fn bracket_zeros(&self, how_many: usize) -> Result<Vec<Bracket>> {
        let mut brackets: Vec<Bracket> = Vec::with_capacity(how_many + 4);
        let mut gram = self.gram_point(-1)?;
        let mut start = Sample::at(gram.g, self.z_unchecked(gram.g));
        debug_assert!(is_good(gram.n, start.z));
        while brackets.len() < how_many {
            // collect one block, widening it while zeros are unaccounted for
            let block_start_n = gram.n;
            let mut points = vec![start];
            let mut found = Vec::new();
            for widening in 0..=MAX_WIDENINGS {
                loop {
                    gram = self.gram_from(gram.n + 1, gram.g + PI / theta_prime(gram.g))?;
                    if gram.g > self.config.max_height {
                        return Err(Error::Domain(format!(
                            "zero {} lies above max_height {}",
                            brackets.len() + 1,
                            self.config.max_height
                        )));
                    }
                    let s = Sample::at(gram.g, self.z_unchecked(gram.g));
                    points.push(s);
                    if is_good(gram.n, s.z) {
                        break;
                    }
                }
                let expected = (gram.n - block_start_n) as usize;
                found = self.scan_block(&points, expected)?;
                if found.len() == expected {
                    break;
                }
                if widening == MAX_WIDENINGS {
                    return Err(Error::CountMismatch {
                        height: gram.g,
                        found: found.len(),
                        expected,
                    });
                }
            }
            brackets.extend(found);
            start = *points.last().expect("block has an end point");
        }
        brackets.truncate(how_many);
        Ok(brackets)
    }

    /// Sign changes across a block, refining each Gram interval into up to
    /// `MAX_SUBDIVISIONS` pieces until `expected` changes are seen.
    fn scan_block(&self, points: &[Sample], expected: usize) -> Result<Vec<Bracket>> {
        let mut pieces = 1;
        loop {
            let mut samples = Vec::with_capacity((points.len() - 1) * pieces + 1);
            samples.push(points[0]);
            for w in points.windows(2) {
                let (a, b) = (w[0], w[1]);
                for i in 1..pieces {
                    let t = a.t + (b.t - a.t) * i as f64 / pieces as f64;
                    samples.push(Sample::at(t, self.z_unchecked(t)));
                }
                samples.push(b);
            }
            let found: Vec<Bracket> = samples
                .windows(2)
                .filter(|w| (w[0].z > 0.0) != (w[1].z > 0.0))
                .map(|w| Bracket { lo: w[0], hi: w[1] })
                .collect();
            if found.len() > expected {
                return Err(Error::CountMismatch {
                    height: points.last().map(|p| p.t).unwrap_or(0.0),
                    found: found.len(),
                    expected,
                });
            }
            if found.len() == expected || pieces >= MAX_SUBDIVISIONS {
                return Ok(found);
            }
            pieces *= 2;
        }
    }

    fn bisect(&self, b: Bracket, accuracy: f64) -> f64 {
        let (mut lo, mut hi) = (b.lo.t, b.hi.t);
        let lo_positive = b.lo.z > 0.0;
        while hi - lo > accuracy {
            let mid = 0.5 * (lo + hi);
            if (self.z_unchecked(mid) > 0.0) == lo_positive {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }
}

fn is_good(n: i64, z: f64) -> bool {
    if n.rem_euclid(2) == 0 {
        z > 0.0
    } else {
        z < 0.0
    }
}

#[derive(Debug, Clone, Copy)]
struct Sample {
    t: f64,
    z: f64,
}

impl Sample {
    fn at(t: f64, z: f64) -> Self {
        Sample { t, z }
    }
}

#[derive(Debug, Clone, Copy)]
struct Bracket {
    lo: Sample,
    hi: Sample,
}
