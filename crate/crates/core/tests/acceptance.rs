//! Acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line, even under `cargo test`.

use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use zerodist::alpha::primes::{is_prime, primes_upto};
use zerodist::construct::{AdversarialConstruction, BudgetMode, Decay, Sequence};
use zerodist::empirical::{landau_compare, weyl_sum, EmpiricalMeasure, LANDAU_BUDGET_CONSTANT};
use zerodist::scalar::Real;
use zerodist::zeros::{ingest_zeros, log_grid, rvm_main_term, ZeroFormat};
use zerodist::*;

type Outcome = std::result::Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)*) => {
        if !$cond {
            return Err(format!($($fmt)*));
        }
    };
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn log2_alpha() -> AlphaSpec {
    parse_alpha("log(2)/(2*pi)").unwrap()
}

fn log6_alpha() -> AlphaSpec {
    parse_alpha("log(6)/(2*pi)").unwrap()
}

fn log2_model() -> Density {
    Density::resonant(2, 1, 1).unwrap()
}

/// The first 10⁵ zeros, computed by the engine and checked against the
/// sampled reference ordinates before any criterion sees them.
struct Desk {
    zeros: ZeroList,
    t: f64,
}

fn desk() -> std::result::Result<Desk, String> {
    let engine = RsEngine::new(EngineConfig::default()).map_err(|e| e.to_string())?;
    let zeros = engine.find_zeros(100_000).map_err(|e| e.to_string())?;
    let text = std::fs::read_to_string(data("zeros_sampled.txt")).map_err(|e| e.to_string())?;
    let mut worst = 0.0f64;
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let mut it = line.split_whitespace();
        let idx: usize = it.next().unwrap().parse().unwrap();
        let value: f64 = it.next().unwrap().parse().unwrap();
        worst = worst.max((zeros.ordinates()[idx - 1] - value).abs());
    }
    if worst > 1e-6 {
        return Err(format!("computed zeros drift from the sampled reference by {worst:e}"));
    }
    let t = zeros.last();
    Ok(Desk { zeros, t })
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let out = f();
    let elapsed = start.elapsed();
    match (out, limit) {
        (Ok(msg), Some(l)) if elapsed > l => Err(format!("{msg}; took {elapsed:.1?}, limit {l:?}")),
        (Ok(msg), _) => Ok(format!("{msg}; {elapsed:.1?}")),
        (Err(msg), _) => Err(msg),
    }
}

fn zero_engine() -> Outcome {
    let engine = RsEngine::new(EngineConfig::default()).map_err(|e| e.to_string())?;
    let computed = engine.find_zeros(100).map_err(|e| e.to_string())?;
    let reference = ingest_zeros(
        BufReader::new(File::open(data("zeros_first100.txt")).map_err(|e| e.to_string())?),
        ZeroFormat::Plain,
        5e-10,
        Provenance::Ingested("zeros_first100.txt".into()),
    )
    .map_err(|e| e.to_string())?;
    ensure!(reference.count() == 100, "reference holds {} zeros", reference.count());
    let worst = computed
        .ordinates()
        .iter()
        .zip(reference.ordinates())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    ensure!(worst <= 1e-6, "max deviation {worst:e} > 1e-6");
    let n100 = computed.count_upto(100.0).count;
    ensure!(n100 == 29, "N(100) = {n100}");
    let mut worst_ratio = 0.0f64;
    for t in log_grid(computed.ordinates()[0], computed.last(), 400) {
        let n = computed.count_upto(t).count as f64;
        let ratio = (n - rvm_main_term(t).unwrap()).abs() / (2.0 * t.ln());
        worst_ratio = worst_ratio.max(ratio);
    }
    ensure!(worst_ratio <= 1.0, "|N - main| / (2 log T) reaches {worst_ratio}");
    Ok(format!("max |dev| {worst:.2e}, N(100) = 29, max |N - main|/(2 log T) = {worst_ratio:.3}"))
}

/// Five-point Gauss-Legendre on `[a, b]`.
fn gauss5(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const X: [f64; 5] = [
        0.0,
        0.538_469_310_105_683_1,
        -0.538_469_310_105_683_1,
        0.906_179_845_938_664,
        -0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let (m, h) = (0.5 * (a + b), 0.5 * (b - a));
    X.iter().zip(W).map(|(&x, w)| w * f(m + h * x)).sum::<f64>() * h
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn density_identities() -> Outcome {
    const GRID: usize = 10_000;
    let mut models = Vec::new();
    for p in (2..=13).filter(|&p| is_prime(p)) {
        for a in 1..=3 {
            for q in (1..=4).filter(|&q| gcd(a, q) == 1) {
                models.push((p, a, q));
            }
        }
    }
    let failures: Vec<String> = models
        .par_iter()
        .filter_map(|&(p, a, q)| {
            let m = Density::resonant(p, a, q).unwrap();
            let ts: Vec<f64> = (0..=GRID).map(|i| i as f64 / GRID as f64).collect();
            let series = ts.iter().map(|&t| (m.g(t) - m.g_series(t, 200)).abs()).fold(0.0, f64::max);
            let mean = ts[..GRID].iter().map(|&t| m.g(t)).collect::<Kahan>().value() / GRID as f64;
            let lp = (p as f64).ln();
            let closed_min = -lp / (std::f64::consts::PI * ((a as f64 / 2.0) * lp).exp_m1());
            let gmin = m.g_min().unwrap();
            let grid_min = ts.iter().map(|&t| m.g(t)).fold(f64::INFINITY, f64::min);
            let mut cum = Kahan::new();
            let mut cum_err = 0.0f64;
            for w in ts.windows(2) {
                cum.add(gauss5(|t| m.g(t), w[0], w[1]));
                cum_err = cum_err.max((m.cumulative_g(w[1]) - cum.value()).abs());
            }
            let parseval = lp * lp / (2.0 * std::f64::consts::PI.powi(2) * ((p as f64).powi(a as i32) - 1.0));
            let b = m.b_constant().unwrap();
            let parseval_err = (b.integral_g_sq - parseval)
                .abs()
                .max((b.integral_g_sq_quadrature - parseval).abs());
            let bad = series > 1e-10
                || mean.abs() > 1e-10
                || (gmin - closed_min).abs() > 1e-12
                || (grid_min - gmin).abs() > 1e-12
                || cum_err > 1e-10
                || parseval_err > 1e-9;
            bad.then(|| {
                format!(
                    "({p},{a},{q}): series {series:e}, mean {mean:e}, g_min {gmin} vs {closed_min} (grid {grid_min}), cumulative {cum_err:e}, parseval {parseval_err:e}"
                )
            })
        })
        .collect();
    ensure!(failures.is_empty(), "{}", failures.join("; "));
    Ok(format!("{} models on a {GRID}-point grid", models.len()))
}

fn weyl_landau(d: &Desk) -> Outcome {
    let targets = [-0.078006, -0.055157, -0.039003];
    let mut parts = Vec::new();
    for (j, want) in (1..=3).zip(targets) {
        let w = weyl_sum(&d.zeros, &log2_alpha(), j, d.t).map_err(|e| e.to_string())?;
        let dev = ((w.normalized.re - want).powi(2) + w.normalized.im.powi(2)).sqrt();
        ensure!(dev <= 0.01, "log2 j={j}: normalized {:?} vs {want}", w.normalized);
        parts.push(format!("j={j} {:.6}", w.normalized.re));
    }
    for j in 1..=5 {
        let w = weyl_sum(&d.zeros, &log6_alpha(), j, d.t).map_err(|e| e.to_string())?;
        let abs = w.normalized.re.hypot(w.normalized.im);
        ensure!(abs <= 0.02, "log6 j={j}: |normalized| = {abs}");
    }
    let l = landau_compare(&d.zeros, 2.0, d.t, LANDAU_BUDGET_CONSTANT).map_err(|e| e.to_string())?;
    ensure!(l.within_budget && l.ratio <= 4.0, "landau x=2 ratio {}", l.ratio);
    Ok(format!("log2 {}; log6 flat; landau ratio {:.4}", parts.join(", "), l.ratio))
}

/// `sup_y |#{x < y}/N − y|` and its right-limit twin on a grid of spacing `1/grid`.
fn grid_discrepancy(points: &[f64], grid: usize) -> f64 {
    let mut sorted = points.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let (mut below, mut at_or_below, mut best) = (0usize, 0usize, 0.0f64);
    for i in 0..=grid {
        let y = i as f64 / grid as f64;
        while below < sorted.len() && sorted[below] < y {
            below += 1;
        }
        while at_or_below < sorted.len() && sorted[at_or_below] <= y {
            at_or_below += 1;
        }
        best = best.max((below as f64 / n - y).abs()).max((at_or_below as f64 / n - y).abs());
    }
    best
}

fn discrepancy(d: &Desk) -> Outcome {
    let em = fractional_parts(&d.zeros, &log2_alpha(), d.t).map_err(|e| e.to_string())?;
    let ds = em.star_discrepancy().map_err(|e| e.to_string())?;
    let scaled = ds * d.t.ln();
    let c = log2_model().predicted_discrepancy(d.t).unwrap().constant;
    ensure!((c - 0.173287).abs() < 1e-6, "prediction constant {c}");
    ensure!((0.5 * c..=2.0 * c).contains(&scaled), "D* log T = {scaled}, outside [0.5, 2]·{c}");
    let identity = (ds - d.t / em.n_of_t() as f64 * em.sup_abs_m()).abs();
    ensure!(identity <= 1e-12, "D* vs (T/N) sup|M| differ by {identity:e}");

    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut worst = 0.0f64;
    for _ in 0..200 {
        let size = rng.gen_range(1..=50);
        let pts: Vec<f64> = (0..size).map(|_| rng.gen::<f64>()).collect();
        let m = EmpiricalMeasure::from_fracs(parse_alpha("1").unwrap(), 1.0, pts.clone()).map_err(|e| e.to_string())?;
        let exact = m.star_discrepancy().map_err(|e| e.to_string())?;
        worst = worst.max((exact - grid_discrepancy(&pts, 1 << 22)).abs());
    }
    ensure!(worst <= 1e-6, "brute-force oracle deviation {worst:e}");
    Ok(format!("D* log T = {scaled:.5} (constant {c:.6}), identity {identity:.1e}, oracle {worst:.1e}"))
}

fn histogram_shape(d: &Desk) -> Outcome {
    let model = log2_model();
    let em = fractional_parts(&d.zeros, &log2_alpha(), d.t).map_err(|e| e.to_string())?;
    let bins = em.histogram(100, Some(&model)).map_err(|e| e.to_string())?;
    let x: Vec<f64> = bins.iter().map(|b| b.empirical).collect();
    let y: Vec<f64> = bins.iter().map(|b| b.predicted).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (mx, my) = (mean(&x), mean(&y));
    let cov: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let pearson = cov / (vx * vy).sqrt();
    let mad = x.iter().zip(&y).map(|(a, b)| (a - b).abs()).sum::<f64>() / x.len() as f64;
    ensure!(pearson >= 0.9, "Pearson {pearson}");
    ensure!(mad <= 0.1, "mean absolute deviation {mad}");

    let flat = fractional_parts(&d.zeros, &log6_alpha(), d.t).map_err(|e| e.to_string())?;
    let worst = flat
        .histogram(100, None)
        .map_err(|e| e.to_string())?
        .iter()
        .map(|b| b.empirical.abs())
        .fold(0.0f64, f64::max);
    ensure!(worst <= 0.15, "log6 bin reaches {worst}");
    Ok(format!("Pearson {pearson:.4}, MAD {mad:.4}, log6 max |bin| {worst:.4}"))
}

fn functionals(d: &Desk) -> Outcome {
    let model = log2_model();
    let em = fractional_parts(&d.zeros, &log2_alpha(), d.t).map_err(|e| e.to_string())?;
    let b2 = em.test_functional(&TestFunction::Bernoulli2, &model);
    let cos = em.test_functional(&TestFunction::Cos(1), &model);
    let one = em.test_functional(&TestFunction::Constant(1.0), &model);
    ensure!(b2.gap <= 0.01, "B2 gap {}", b2.gap);
    ensure!(cos.gap <= 0.01, "cos gap {}", cos.gap);
    ensure!(one.gap == 0.0, "constant gap {}", one.gap);
    Ok(format!("B2 gap {:.2e}, cos gap {:.2e}, constant gap 0", b2.gap, cos.gap))
}

fn integral_bound(d: &Desk) -> Outcome {
    let em = fractional_parts(&d.zeros, &log2_alpha(), d.t).map_err(|e| e.to_string())?;
    let integral = em.integral_abs_m().map_err(|e| e.to_string())?;
    let b = log2_model().b_constant().map_err(|e| e.to_string())?.b;
    ensure!(integral >= 0.8 * b, "∫|M| = {integral} < 0.8·B = {}", 0.8 * b);
    Ok(format!("∫|M| = {integral:.6}, B = {b:.6}"))
}

fn adversary() -> Outcome {
    let mut c = AdversarialConstruction::new(0.0, Decay::parse("n^(-2)").unwrap(), Sequence::Golden, BudgetMode::Tightened)
        .map_err(|e| e.to_string())?;
    c.build(4).map_err(|e| e.to_string())?;
    let mut parts = Vec::new();
    for l in c.levels() {
        let k = l.k as i32;
        let unit = 2f64.powi(-(k + 2));
        ensure!(l.v_k == 3f64.powi(-k), "k={k}: v_k {}", l.v_k);
        ensure!(l.delta_k < unit, "k={k}: delta {} >= 2^-(k+2)", l.delta_k);
        ensure!(l.integral_ik < l.epsilon_k, "k={k}: ∫_I {} >= eps {}", l.integral_ik, l.epsilon_k);
        ensure!((l.j_k.1 - l.j_k.0 - 2.0 * unit).abs() < 1e-15, "k={k}: |J_k| = {}", l.j_k.1 - l.j_k.0);
        ensure!(l.f_nk < l.epsilon_k && l.e_gap <= l.epsilon_k, "k={k}: n_k conditions");
        ensure!(l.j_count as f64 > l.n_k as f64 * unit, "k={k}: J count {}", l.j_count);
        ensure!(!l.bumps.is_empty(), "k={k}: no bumps");
        let mut offsets: Vec<f64> = l.bumps.iter().map(|b| (c.t() - b.center).rem_euclid(1.0)).collect();
        offsets.sort_by(f64::total_cmp);
        for w in offsets.windows(2) {
            ensure!(w[1] - w[0] > l.delta_k, "k={k}: overlapping bumps");
        }
        let lo = offsets[0] - l.delta_k / 2.0;
        let hi = offsets[offsets.len() - 1] + l.delta_k / 2.0;
        ensure!(lo > 2f64.powi(-k) && hi < 2f64.powi(1 - k), "k={k}: supports leave I_k");
        // dense sampling of h on I_k: bounded by v_k and by 2^k 3^-k |x - t|
        let samples = 200_000;
        for i in 1..samples {
            let off = 2f64.powi(-k) * (1.0 + i as f64 / samples as f64);
            let h = c.eval_h(c.t() - off);
            ensure!((0.0..=l.v_k).contains(&h), "k={k}: h = {h} outside [0, v_k]");
            ensure!(h / off <= 2f64.powi(k) * 3f64.powi(-k), "k={k}: h/|x-t| = {}", h / off);
        }

        let g = c.verify_gap(l.k).map_err(|e| e.to_string())?;
        ensure!(g.holds, "k={k}: gap {} - {} < f(n_k) = {}", g.lhs, g.uncertainty, g.f_nk);
        ensure!(g.terms.sigma_i >= 1.0 / (4.0 * 6f64.powi(k)), "k={k}: Σ_I = {}", g.terms.sigma_i);
        let guarantee = 1.0 / (8.0 * 6f64.powi(k));
        ensure!(g.lhs - g.uncertainty >= guarantee, "k={k}: lhs {} below 1/(8·6^k)", g.lhs);
        parts.push(format!("k={k} n_k={} lhs {:.3e}", l.n_k, g.lhs));
    }
    ensure!(c.eval_h(c.t()) == 0.0, "h(t) != 0");
    Ok(parts.join(", "))
}

fn classifier() -> Outcome {
    let mut grid = Vec::new();
    for p in primes_upto(100) {
        for a in 1..=20u64 {
            for q in (1..=20u64).filter(|&q| gcd(a, q) == 1) {
                grid.push((p, a, q));
            }
        }
    }
    let misses: Vec<String> = grid
        .par_iter()
        .filter_map(|&(p, a, q)| {
            let v = Hp::from_int(p as i64).ln() * Hp::from_int(a as i64) / (Hp::from_int(2) * Hp::pi() * Hp::from_int(q as i64));
            let alpha = AlphaSpec::from_hp(v, None).unwrap();
            match classify_alpha(&alpha, SearchBounds::default()) {
                Ok(c) if c.verdict == (Verdict::Resonant { p, a, q }) => None,
                other => Some(format!("({p},{a},{q}) -> {other:?}")),
            }
        })
        .collect();
    ensure!(misses.is_empty(), "{} misses, first {}", misses.len(), misses[0]);
    for text in ["log(6)/(2*pi)", "1.0", "1/4"] {
        let c = classify_alpha(&parse_alpha(text).unwrap(), SearchBounds::default()).map_err(|e| e.to_string())?;
        ensure!(c.verdict == Verdict::Generic, "{text} -> {:?}", c.verdict);
    }
    Ok(format!("{} grid points recovered; log6/(2pi), 1.0, 1/4 generic", grid.len()))
}

fn main() -> ExitCode {
    let setup = Instant::now();
    let desk = desk();
    let setup = setup.elapsed();
    match &desk {
        Ok(d) => println!("setup: first {} zeros up to T = {:.2} computed in {setup:.1?}", d.zeros.count(), d.t),
        Err(e) => println!("setup failed: {e}"),
    }
    let with_desk = |f: fn(&Desk) -> Outcome| -> Outcome {
        match &desk {
            Ok(d) => f(d),
            Err(e) => Err(format!("no zero data: {e}")),
        }
    };
    let secs = |s| Some(Duration::from_secs(s));
    let results: Vec<(&str, Outcome)> = vec![
        ("1 zero engine", timed(secs(60), zero_engine)),
        ("2 density identities", timed(secs(30), density_identities)),
        ("3 weyl and landau sums", timed(secs(10), || with_desk(weyl_landau))),
        ("4 discrepancy", timed(None, || with_desk(discrepancy))),
        ("5 histogram shape", timed(None, || with_desk(histogram_shape))),
        ("6 functional convergence", timed(None, || with_desk(functionals))),
        ("7 integral of |M|", timed(None, || with_desk(integral_bound))),
        ("8 adversarial construction", timed(secs(120), adversary)),
        ("9 classifier", timed(None, classifier)),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(msg) => println!("PASS criterion {name}: {msg}"),
            Err(msg) => {
                failed += 1;
                println!("FAIL criterion {name}: {msg}");
            }
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
