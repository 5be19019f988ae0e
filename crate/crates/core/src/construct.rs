//! A smooth function h, flat to first order at a point t, whose sample
//! means along a given equidistributed sequence miss ∫h by at least f(n)
//! for infinitely many n.
//!
//! h is assembled level by level. Level k lives on
//! `I_k = (t − 2^{1−k}, t − 2^{−k}]` and is a sum of disjoint bumps of
//! height `v_k = 3^{−k}` centered at the sequence points `a_n ∈ J_k`,
//! `n <= n_k`, where `J_k = [t − 7·2^{−(k+2)}, t − 5·2^{−(k+2)}]`.
//!
//! Internally every point x is stored by its offset `d = (t − x) mod 1`, so
//! `x ∈ I_k` iff `d ∈ [2^{−k}, 2^{1−k})`.

use std::cmp::Ordering;
use std::fmt;
use std::path::Path;
use std::sync::OnceLock;

use serde::Serialize;

use crate::alpha::Expr;
use crate::dd::DoubleDouble;
use crate::error::{Error, Result};
use crate::hp::Hp;
use crate::kahan::KahanSum;
use crate::scalar::{Real, Scalar};

/// `r(x) = exp(1 − 1/(1 − 4x²))` on `|x| < 1/2`, zero elsewhere.
pub fn base_bump<F: Scalar>(x: F) -> F {
    let four_x2 = F::lit(4.0) * x * x;
    if four_x2 >= F::one() {
        return F::zero();
    }
    (F::one() - F::one() / (F::one() - four_x2)).exp()
}

/// `∫ r` over the line.
pub fn bump_integral() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        // r is flat to all orders at ±1/2, so after x = sin(πs/2)/2 the
        // trapezoid rule converges very fast
        let n = 4096;
        let h = 2.0 / n as f64;
        let mut acc = KahanSum::new();
        for i in 1..n {
            let s = -1.0 + i as f64 * h;
            let x = 0.5 * (std::f64::consts::FRAC_PI_2 * s).sin();
            let dx = 0.25 * std::f64::consts::PI * (std::f64::consts::FRAC_PI_2 * s).cos();
            acc.add(base_bump(x) * dx);
        }
        acc.value() * h
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BumpSpec {
    pub center: f64,
    pub height: f64,
    pub width: f64,
}

impl BumpSpec {
    pub fn eval(&self, x: f64) -> f64 {
        self.height * base_bump((x - self.center) / self.width)
    }

    pub fn integral(&self) -> f64 {
        self.height * self.width * bump_integral()
    }
}

/// Sequences in `[0, 1)`, indexed from 1.
#[derive(Debug, Clone)]
pub enum Sequence {
    /// `{nφ}` with φ the golden ratio, reduced in double-double.
    Golden,
    /// Base-2 radical inverse of n.
    VanDerCorput,
    Table(Vec<f64>),
}

fn golden_dd() -> DoubleDouble {
    static PHI: OnceLock<DoubleDouble> = OnceLock::new();
    *PHI.get_or_init(|| ((Hp::from_int(1) + Hp::from_int(5).sqrt()) / Hp::from_int(2)).to_dd())
}

impl Sequence {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let v: f64 = line.parse().map_err(|_| Error::Parse {
                line: i + 1,
                text: line.to_string(),
            })?;
            if !(0.0..1.0).contains(&v) {
                return Err(Error::Domain(format!("line {}: {v} is outside [0, 1)", i + 1)));
            }
            values.push(v);
        }
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        Ok(Sequence::Table(values))
    }

    pub fn get(&self, n: u64) -> Option<f64> {
        match self {
            Sequence::Golden => Some(golden_dd().mul_f64(n as f64).fract_f64()),
            Sequence::VanDerCorput => Some(n.reverse_bits() as f64 / 2f64.powi(64)),
            Sequence::Table(v) => v.get(n.checked_sub(1)? as usize).copied(),
        }
    }

    pub fn len(&self) -> Option<u64> {
        match self {
            Sequence::Table(v) => Some(v.len() as u64),
            _ => None,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Sequence::Golden => "golden".into(),
            Sequence::VanDerCorput => "vandercorput".into(),
            Sequence::Table(v) => format!("table({})", v.len()),
        }
    }
}

/// The decay function f, positive and decreasing.
#[derive(Debug, Clone)]
pub enum Decay {
    Expr { text: String, expr: Expr },
    /// `f(n) = table[n − 1]`, holding the last value beyond the end.
    Table(Vec<f64>),
}

impl Decay {
    pub fn parse(text: &str) -> Result<Self> {
        let expr = Expr::parse(text)?;
        if let Some(v) = expr.variables().into_iter().find(|v| v != "n") {
            return Err(Error::Domain(format!("f may only use the variable n, found {v:?}")));
        }
        Ok(Decay::Expr {
            text: text.trim().to_string(),
            expr,
        })
    }

    pub fn eval(&self, n: u64) -> Result<f64> {
        let v = match self {
            Decay::Expr { expr, .. } => expr.eval(&[("n", n as f64)])?,
            Decay::Table(t) => *t
                .get((n.max(1) - 1) as usize)
                .or(t.last())
                .ok_or(Error::EmptyInput)?,
        };
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::Domain(format!("f({n}) = {v} is not positive")));
        }
        Ok(v)
    }
}

impl fmt::Display for Decay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Decay::Expr { text, .. } => f.write_str(text),
            Decay::Table(t) => write!(f, "table({})", t.len()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BudgetMode {
    /// `ε_k = 7^{−k}`.
    Paper,
    /// `ε_k = 1/(32·6^k)`; certifies the gap at every level.
    Tightened,
}

impl std::str::FromStr for BudgetMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" => Ok(BudgetMode::Paper),
            "tightened" => Ok(BudgetMode::Tightened),
            other => Err(Error::Config(format!("unknown budget mode {other:?}"))),
        }
    }
}

impl BudgetMode {
    pub fn epsilon(self, k: usize) -> f64 {
        match self {
            BudgetMode::Paper => 7f64.powi(-(k as i32)),
            BudgetMode::Tightened => 1.0 / (32.0 * 6f64.powi(k as i32)),
        }
    }

    /// `Σ_{m>k} ε_m`.
    pub fn tail(self, k: usize) -> f64 {
        match self {
            BudgetMode::Paper => self.epsilon(k + 1) * 7.0 / 6.0,
            BudgetMode::Tightened => self.epsilon(k + 1) * 6.0 / 5.0,
        }
    }
}

/// Default cap on the forward scan.
pub const DEFAULT_N_MAX: u64 = 100_000_000;

/// Prefix length and threshold for the Weyl-sum equidistribution screen.
const WEYL_PREFIX: u64 = 1 << 14;
const WEYL_MAX_M: i64 = 16;
const WEYL_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelRecord {
    pub k: usize,
    /// `(t − 2^{1−k}, t − 2^{−k}]`
    pub i_k: (f64, f64),
    /// `[t − 7·2^{−(k+2)}, t − 5·2^{−(k+2)}]`
    pub j_k: (f64, f64),
    pub v_k: f64,
    pub epsilon_k: f64,
    pub n_k: u64,
    pub delta_k: f64,
    pub f_nk: f64,
    /// `|(1/n_k)Σ_{a_j∈E_k} h(a_j) − ∫_{E_k} h|` at `n_k`.
    pub e_gap: f64,
    /// `#{m <= n_k : a_m ∈ J_k}`.
    pub j_count: u64,
    pub bumps: Vec<BumpSpec>,
    /// `∫_{I_k} h = v_k·δ_k·∫r·#bumps`.
    pub integral_ik: f64,
    /// Bump centers as offsets `t − a mod 1`, ascending.
    #[serde(skip)]
    offsets: Vec<f64>,
}

impl LevelRecord {
    pub fn bump_count(&self) -> usize {
        self.bumps.len()
    }

    fn eval_offset(&self, d: f64) -> f64 {
        let i = self.offsets.partition_point(|&c| c < d);
        let mut best = 0.0f64;
        for j in [i.wrapping_sub(1), i] {
            if let Some(&c) = self.offsets.get(j) {
                best = best.max(self.v_k * base_bump((d - c) / self.delta_k));
            }
        }
        best
    }
}

#[derive(Debug, Clone)]
pub struct AdversarialConstruction {
    t: f64,
    f: Decay,
    sequence: Sequence,
    mode: BudgetMode,
    n_max: u64,
    levels: Vec<LevelRecord>,
}

/// Level owning offset `d`, if any (`d = 0` is the point t itself).
fn level_of(d: f64) -> Option<usize> {
    if !(d > 0.0) {
        return None;
    }
    let mut k = 1;
    let mut lo = 0.5;
    while d < lo {
        k += 1;
        lo *= 0.5;
        if k > 1000 {
            return None;
        }
    }
    Some(k)
}

fn in_j(d: f64, k: usize) -> bool {
    let unit = 2f64.powi(-(k as i32 + 2));
    (5.0 * unit..=7.0 * unit).contains(&d)
}

impl AdversarialConstruction {
    pub fn new(t: f64, f: Decay, sequence: Sequence, mode: BudgetMode) -> Result<Self> {
        if !(0.0..1.0).contains(&t) {
            return Err(Error::Domain(format!("t must lie in [0, 1), got {t}")));
        }
        Ok(AdversarialConstruction {
            t,
            f,
            sequence,
            mode,
            n_max: DEFAULT_N_MAX,
            levels: Vec::new(),
        })
    }

    pub fn with_n_max(mut self, n_max: u64) -> Self {
        self.n_max = n_max;
        self
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn mode(&self) -> BudgetMode {
        self.mode
    }

    pub fn decay(&self) -> &Decay {
        &self.f
    }

    pub fn sequence(&self) -> &Sequence {
        &self.sequence
    }

    pub fn levels(&self) -> &[LevelRecord] {
        &self.levels
    }

    fn offset(&self, x: f64) -> f64 {
        let d = (self.t - x).rem_euclid(1.0);
        if d >= 1.0 {
            0.0
        } else {
            d
        }
    }

    fn eval_offset(&self, d: f64) -> f64 {
        match level_of(d) {
            Some(k) if k <= self.levels.len() => self.levels[k - 1].eval_offset(d),
            _ => 0.0,
        }
    }

    /// The function h built so far (unbuilt levels contribute zero).
    pub fn eval_h(&self, x: f64) -> f64 {
        self.eval_offset(self.offset(x))
    }

    /// `∫ h` over the built levels.
    pub fn integral_h(&self) -> f64 {
        self.levels.iter().fold(0.0, |acc, l| acc + l.integral_ik)
    }

    /// Screens the sequence with Weyl sums `|mean e(m a_n)|`, m = 1..16.
    pub fn equidistribution_check(&self) -> Result<()> {
        let n = self.sequence.len().map_or(WEYL_PREFIX, |l| l.min(WEYL_PREFIX)).min(self.n_max);
        for m in 1..=WEYL_MAX_M {
            let (mut re, mut im) = (KahanSum::new(), KahanSum::new());
            for i in 1..=n {
                let a = self.sequence.get(i).expect("within sequence length");
                let (s, c) = (std::f64::consts::TAU * ((m as f64 * a).fract())).sin_cos();
                re.add(c);
                im.add(s);
            }
            let magnitude = re.value().hypot(im.value()) / n as f64;
            if magnitude > WEYL_THRESHOLD {
                return Err(Error::NotEquidistributed { m, magnitude });
            }
        }
        Ok(())
    }

    /// Builds level `k`, which must be the next unbuilt one.
    pub fn build_level(&mut self, k: usize) -> Result<&LevelRecord> {
        if k != self.levels.len() + 1 {
            return Err(Error::LevelNotBuilt(self.levels.len() + 1));
        }
        if k == 1 {
            self.equidistribution_check()?;
        }
        let eps = self.mode.epsilon(k);
        let v_k = 3f64.powi(-(k as i32));
        let n_cap = self.sequence.len().map_or(self.n_max, |l| l.min(self.n_max));
        // f is decreasing, so f(n_cap) >= ε_k rules out every n <= n_cap
        let f_cap = self.f.eval(n_cap.max(1))?;
        if f_cap >= eps {
            return Err(Error::Infeasible {
                k,
                diagnostics: format!("f({n_cap}) = {f_cap:e} >= epsilon_k = {eps:e}"),
            });
        }
        let e_floor = 2f64.powi(1 - k as i32);
        let integral_e: f64 = self.integral_h();
        let j_threshold = 2f64.powi(-(k as i32 + 2));

        let mut sum_e = KahanSum::new();
        let mut j_points: Vec<(f64, f64)> = Vec::new();
        let mut found = None;
        let mut last = (0.0, 0.0, 0u64);
        for n in 1..=n_cap {
            let a = self.sequence.get(n).expect("within sequence length");
            let d = self.offset(a);
            if d >= e_floor {
                sum_e.add(self.eval_offset(d));
            } else if in_j(d, k) {
                j_points.push((d, a));
            }
            let nf = n as f64;
            let e_gap = (sum_e.value() / nf - integral_e).abs();
            let j_ok = j_points.len() as f64 > nf * j_threshold;
            last = (e_gap, nf, j_points.len() as u64);
            if e_gap <= eps && j_ok {
                let f_n = self.f.eval(n)?;
                if f_n < eps {
                    found = Some((n, f_n, e_gap));
                    break;
                }
            }
        }
        let Some((n_k, f_nk, e_gap)) = found else {
            return Err(Error::Infeasible {
                k,
                diagnostics: format!(
                    "scan reached n = {n_cap}: e_gap = {:e} (epsilon {eps:e}), J count = {} (needs > {:e}), f = {f_cap:e}",
                    last.0,
                    last.2,
                    last.1 * j_threshold
                ),
            });
        };

        let j_count = j_points.len() as u64;
        // distinct values only; compare the sequence values themselves
        j_points.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        j_points.dedup_by(|x, y| x.1 == y.1);
        let offsets: Vec<f64> = j_points.iter().map(|p| p.0).collect();
        let min_gap = offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min);
        let budget_width = eps / (v_k * bump_integral() * offsets.len() as f64);
        let delta_k = 0.5 * 2f64.powi(-(k as i32 + 2)).min(min_gap).min(budget_width);
        let bumps: Vec<BumpSpec> = j_points
            .iter()
            .map(|&(_, a)| BumpSpec {
                center: a,
                height: v_k,
                width: delta_k,
            })
            .collect();
        let integral_ik = v_k * delta_k * bump_integral() * bumps.len() as f64;
        let (t, unit) = (self.t, 2f64.powi(-(k as i32 + 2)));
        self.levels.push(LevelRecord {
            k,
            i_k: (t - 8.0 * unit, t - 4.0 * unit),
            j_k: (t - 7.0 * unit, t - 5.0 * unit),
            v_k,
            epsilon_k: eps,
            n_k,
            delta_k,
            f_nk,
            e_gap,
            j_count,
            bumps,
            integral_ik,
            offsets,
        });
        Ok(self.levels.last().expect("just pushed"))
    }

    /// Builds levels up to `k_max`.
    pub fn build(&mut self, k_max: usize) -> Result<()> {
        while self.levels.len() < k_max {
            self.build_level(self.levels.len() + 1)?;
        }
        Ok(())
    }

    /// Evaluates `(1/n_k)Σ_{j≤n_k} h(a_j) − ∫h` split over `E_k`, `I_k`, `T_k`.
    pub fn verify_gap(&self, k: usize) -> Result<GapReport> {
        if k == 0 || k > self.levels.len() {
            return Err(Error::LevelNotBuilt(k));
        }
        let level = &self.levels[k - 1];
        let n_k = level.n_k;
        let (mut se, mut si, mut st) = (KahanSum::new(), KahanSum::new(), KahanSum::new());
        for n in 1..=n_k {
            let a = self.sequence.get(n).expect("scanned before");
            let d = self.offset(a);
            let h = self.eval_offset(d);
            match level_of(d).map(|m| m.cmp(&k)) {
                Some(Ordering::Less) => se.add(h),
                Some(Ordering::Equal) => si.add(h),
                _ => st.add(h),
            }
        }
        let nf = n_k as f64;
        let sums = (se.value() / nf, si.value() / nf, st.value() / nf);
        let ints = (
            self.levels[..k - 1].iter().fold(0.0, |acc, l| acc + l.integral_ik),
            level.integral_ik,
            self.levels[k..].iter().fold(0.0, |acc, l| acc + l.integral_ik),
        );
        let lhs = (sums.0 + sums.1 + sums.2) - (ints.0 + ints.1 + ints.2);
        let uncertainty = self.mode.tail(self.levels.len());
        let holds = lhs - uncertainty >= level.f_nk;
        let sigma_i_bound = 1.0 / (2f64.powi(k as i32 + 2) * 3f64.powi(k as i32));
        let analytic_bound = match self.mode {
            BudgetMode::Tightened => 1.0 / (8.0 * 6f64.powi(k as i32)),
            BudgetMode::Paper => 1.0 / (4.0 * 6f64.powi(k as i32)) - 4.0 * 7f64.powi(-(k as i32)),
        };
        let guaranteed = match self.mode {
            BudgetMode::Tightened => true,
            BudgetMode::Paper => analytic_bound >= level.epsilon_k,
        };
        let report = GapReport {
            k,
            n_k,
            lhs,
            uncertainty,
            f_nk: level.f_nk,
            holds,
            guaranteed,
            analytic_bound,
            sigma_i_bound,
            terms: GapTerms {
                sigma_e: sums.0,
                sigma_i: sums.1,
                sigma_t: sums.2,
                integral_e: ints.0,
                integral_i: ints.1,
                integral_t: ints.2,
            },
        };
        if self.mode == BudgetMode::Tightened && !(lhs - uncertainty >= analytic_bound && analytic_bound >= level.f_nk) {
            return Err(Error::Assertion(format!(
                "level {k}: gap {lhs:e} (uncertainty {uncertainty:e}) below guarantee {analytic_bound:e} or f(n_k) = {:e}",
                level.f_nk
            )));
        }
        Ok(report)
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapTerms {
    pub sigma_e: f64,
    pub sigma_i: f64,
    pub sigma_t: f64,
    pub integral_e: f64,
    pub integral_i: f64,
    pub integral_t: f64,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct GapReport {
    pub k: usize,
    pub n_k: u64,
    pub lhs: f64,
    /// Bound on `∫h` over levels that were not built.
    pub uncertainty: f64,
    pub f_nk: f64,
    /// `lhs − uncertainty >= f(n_k)`.
    pub holds: bool,
    /// Whether the budgets alone force the inequality at this level.
    pub guaranteed: bool,
    pub analytic_bound: f64,
    /// `1/(2^{k+2}·3^k)`, the lower bound for `Σ_{I_k}`.
    pub sigma_i_bound: f64,
    pub terms: GapTerms,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden(mode: BudgetMode) -> AdversarialConstruction {
        AdversarialConstruction::new(0.0, Decay::parse("n^(-2)").unwrap(), Sequence::Golden, mode).unwrap()
    }

    #[test]
    fn bump_shape() {
        assert_eq!(base_bump(0.0f64), 1.0);
        assert_eq!(base_bump(0.5f64), 0.0);
        assert_eq!(base_bump(-0.5f64), 0.0);
        assert_eq!(base_bump(0.6f64), 0.0);
        assert_eq!(base_bump(-0.6f32), 0.0);
        assert!(base_bump(0.2f64) > base_bump(0.3f64));
        assert!((base_bump(0.25f32) - base_bump(0.25f64) as f32).abs() < 1e-6);
    }

    #[test]
    fn bump_integral_matches_reference() {
        // high-precision quadrature reference
        assert!((bump_integral() - 0.60345016121893808767).abs() < 1e-14, "{}", bump_integral());
    }

    #[test]
    fn sequences() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((Sequence::Golden.get(1).unwrap() - (phi - 1.0)).abs() < 1e-15);
        let v: Vec<f64> = (1..=4).map(|n| Sequence::VanDerCorput.get(n).unwrap()).collect();
        assert_eq!(v, vec![0.5, 0.25, 0.75, 0.125]);
        let t = Sequence::Table(vec![0.1, 0.2]);
        assert_eq!((t.get(2), t.get(3), t.get(0)), (Some(0.2), None, None));
    }

    #[test]
    fn interval_geometry() {
        let mut c = golden(BudgetMode::Tightened);
        let l = c.build_level(1).unwrap().clone();
        assert_eq!(l.j_k, (-7.0 / 8.0, -5.0 / 8.0));
        assert_eq!(l.j_k.1 - l.j_k.0, 0.25);
        assert_eq!(l.i_k, (-1.0, -0.5));
        assert!(l.bump_count() >= 1);
    }

    #[test]
    fn constant_decay_is_infeasible() {
        let mut c = AdversarialConstruction::new(0.0, Decay::parse("0.9").unwrap(), Sequence::Golden, BudgetMode::Tightened)
            .unwrap();
        assert!(matches!(c.build_level(1), Err(Error::Infeasible { k: 1, .. })));
    }

    #[test]
    fn non_equidistributed_sequence_is_detected() {
        let seq = Sequence::Table(vec![0.25; 5000]);
        let mut c = AdversarialConstruction::new(0.0, Decay::parse("1/n").unwrap(), seq, BudgetMode::Tightened).unwrap();
        assert!(matches!(c.build_level(1), Err(Error::NotEquidistributed { m: 1, .. })));
    }

    #[test]
    fn levels_must_be_built_in_order() {
        let mut c = golden(BudgetMode::Tightened);
        assert!(matches!(c.build_level(2), Err(Error::LevelNotBuilt(1))));
        assert!(matches!(c.verify_gap(1), Err(Error::LevelNotBuilt(1))));
    }

    #[test]
    fn eval_h_examples() {
        let mut c = golden(BudgetMode::Tightened);
        c.build(3).unwrap();
        assert_eq!(c.eval_h(0.0), 0.0);
        for l in c.levels() {
            for b in &l.bumps {
                assert_eq!(c.eval_h(b.center), l.v_k);
            }
            let edge = c.t() - 2f64.powi(-(l.k as i32));
            assert_eq!(c.eval_h(edge), 0.0);
            assert_eq!(c.eval_h(edge + 1e-9), 0.0);
            assert_eq!(c.eval_h(edge - 1e-9), 0.0);
        }
    }

    #[test]
    fn gap_holds_with_guarantee_in_tightened_mode() {
        let mut c = golden(BudgetMode::Tightened);
        c.build(3).unwrap();
        for k in 1..=3 {
            let g = c.verify_gap(k).unwrap();
            assert!(g.holds && g.guaranteed, "{g:?}");
            assert!(g.terms.sigma_i >= g.sigma_i_bound);
            assert!(g.lhs >= g.analytic_bound);
        }
    }

    #[test]
    fn paper_mode_reports_truth_without_guarantee() {
        let mut c = golden(BudgetMode::Paper);
        c.build(2).unwrap();
        for k in 1..=2 {
            let g = c.verify_gap(k).unwrap();
            assert!(!g.guaranteed);
            assert_eq!(g.holds, g.lhs - g.uncertainty >= g.f_nk);
        }
    }

    #[test]
    fn level_invariants() {
        let mut c = golden(BudgetMode::Tightened);
        c.build(3).unwrap();
        for l in c.levels() {
            let k = l.k as i32;
            assert!(l.delta_k < 2f64.powi(-(k + 2)));
            assert!(l.integral_ik < l.epsilon_k);
            assert!(l.f_nk < l.epsilon_k && l.e_gap <= l.epsilon_k);
            assert!(l.j_count as f64 > l.n_k as f64 / 2f64.powi(k + 2));
            for w in l.offsets.windows(2) {
                assert!(w[1] - w[0] > l.delta_k);
            }
            // bump supports stay inside I_k
            let lo = l.offsets[0] - l.delta_k / 2.0;
            let hi = l.offsets[l.offsets.len() - 1] + l.delta_k / 2.0;
            assert!(lo > 2f64.powi(-k) && hi < 2f64.powi(1 - k));
        }
    }

    #[test]
    fn reproducible() {
        let mut a = golden(BudgetMode::Tightened);
        let mut b = golden(BudgetMode::Tightened);
        a.build(2).unwrap();
        b.build(2).unwrap();
        assert_eq!(a.levels(), b.levels());
    }

    #[test]
    fn decay_expressions() {
        let f = Decay::parse("1/log(n+1)").unwrap();
        assert!((f.eval(1).unwrap() - 1.0 / 2f64.ln()).abs() < 1e-15);
        assert!(Decay::parse("x^2").is_err());
        assert!(Decay::parse("0-n").unwrap().eval(3).is_err());
    }
}
