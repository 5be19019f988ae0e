use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde_json::{json, Value};
use zerodist::alpha::{classify_alpha, parse_alpha, AlphaClass, AlphaSpec, SearchBounds};
use zerodist::construct::{AdversarialConstruction, BudgetMode, Decay, Sequence};
use zerodist::empirical::{fractional_parts, landau_compare, weyl_prediction, weyl_sum, EmpiricalMeasure};
use zerodist::rs::{EngineConfig, RsEngine};
use zerodist::zeros::{self, ingest_zeros, Provenance, ZeroFormat, ZeroList};
use zerodist::{Density, Error};

use crate::config::{RunConfig, UsageError};
use crate::output::{csv, emit_json, header, write_atomic};
use crate::CliError;

type Res = Result<(), CliError>;

pub fn dispatch(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Res {
    match cfg.command.name {
        "zeros-ingest" => zeros_ingest(cfg, stdout),
        "zeros-compute" => zeros_compute(cfg, stdout),
        "classify" => classify(cfg, stdout),
        "density" => density(cfg, stdout),
        "analyze" => analyze(cfg, stdout, stderr),
        "weyl" => weyl(cfg, stdout, stderr),
        "landau" => landau(cfg, stdout, stderr),
        "discrepancy" => discrepancy(cfg, stdout, stderr),
        "adversary" => adversary(cfg, stdout),
        other => unreachable!("schema lists {other}"),
    }
}

/// Reads a zero file, honouring an `accuracy=`/`source=` header when present.
fn load_zeros(cfg: &RunConfig, key: &str) -> Result<ZeroList, CliError> {
    let path = cfg.require(key)?;
    let format: ZeroFormat = cfg.require("format")?.parse()?;
    let mut reader = BufReader::new(File::open(path).map_err(|e| {
        Error::Io(std::io::Error::new(e.kind(), format!("{path}: {e}")))
    })?);
    let first = {
        let buf = reader.fill_buf()?;
        let end = buf.iter().position(|&b| b == b'\n').unwrap_or(buf.len());
        String::from_utf8_lossy(&buf[..end]).into_owned()
    };
    let accuracy = match cfg.float("accuracy")? {
        Some(a) => a,
        None => zeros::header_accuracy(&first).unwrap_or(zeros::DEFAULT_ACCURACY),
    };
    let computed = first
        .trim()
        .strip_prefix('#')
        .and_then(|rest| rest.split_whitespace().find_map(|kv| kv.strip_prefix("source=computed:")));
    let source = match computed {
        Some(detail) => Provenance::Computed(format!("{detail} via {path}")),
        None => Provenance::Ingested(path.to_string()),
    };
    Ok(ingest_zeros(reader, format, accuracy, source)?)
}

fn bounds(cfg: &RunConfig) -> Result<SearchBounds, CliError> {
    let nonneg = |name: &str| -> Result<u64, CliError> {
        let v = cfg.require_int(name)?;
        u64::try_from(v).map_err(|_| UsageError(format!("--{name} must be nonnegative")).into())
    };
    Ok(SearchBounds {
        p_max: nonneg("pmax")?,
        a_max: nonneg("amax")?,
        q_max: nonneg("qmax")?,
        tol: cfg.require_float("alpha-tol")?,
    })
}

fn alpha_and_class(cfg: &RunConfig) -> Result<(AlphaSpec, AlphaClass), CliError> {
    let alpha = parse_alpha(cfg.require("alpha")?)?;
    let class = classify_alpha(&alpha, bounds(cfg)?)?;
    Ok((alpha, class))
}

fn class_json(class: &AlphaClass) -> Value {
    let mut v = serde_json::to_value(class).expect("serializable");
    if !class.is_resonant() {
        v["note"] = json!("no resonance within the search bounds and tolerance");
    }
    v
}

fn height(cfg: &RunConfig, zl: &ZeroList, stderr: &mut dyn Write) -> Result<f64, CliError> {
    let t = cfg.float("T")?.unwrap_or_else(|| zl.last());
    if !(t > 0.0) {
        return Err(UsageError(format!("--T must be positive, got {t}")).into());
    }
    if zl.count_upto(t).truncated {
        let _ = writeln!(
            stderr,
            "warning: T = {t} is past the last ordinate {}; N(T) is a lower bound",
            zl.last()
        );
    }
    Ok(t)
}

fn zeros_ingest(cfg: &RunConfig, stdout: &mut dyn Write) -> Res {
    let zl = load_zeros(cfg, "input")?;
    let points = cfg.positive("grid-points")?;
    let lo = zl.ordinates()[0].max(20.0);
    let grid = if zl.last() > lo {
        zeros::log_grid(lo, zl.last(), points)
    } else {
        vec![zl.last()]
    };
    let validation = zeros::validate(&zl, &grid, cfg.require_float("residual-c")?);
    if let Some(out) = cfg.path("out") {
        let mut buf = Vec::new();
        zl.write_to(&mut buf)?;
        write_atomic(out, &buf)?;
    }
    let mut report = header(cfg, Some(&zl));
    report["first"] = json!(zl.ordinates()[0]);
    report["validation"] = json!(validation);
    report["clean"] = json!(validation.is_clean());
    emit_json(cfg.path("json"), &report, stdout)?;
    if !validation.is_clean() {
        return Err(CliError::Invalid(format!(
            "zero table failed validation ({} near-duplicates, {} flagged heights)",
            validation.near_duplicates.len(),
            validation.reports.iter().filter(|r| r.flagged).count()
        )));
    }
    Ok(())
}

fn zeros_compute(cfg: &RunConfig, stdout: &mut dyn Write) -> Res {
    let count = cfg.positive("count")?;
    let out = cfg.require("out")?;
    let order = cfg.require_int("correction-order")?;
    let engine = RsEngine::new(EngineConfig {
        target_accuracy: cfg.require_float("target-accuracy")?,
        max_height: cfg.require_float("max-height")?,
        correction_order: u8::try_from(order)
            .map_err(|_| UsageError(format!("--correction-order out of range: {order}")))?,
        low_t_cutoff: cfg.require_float("low-t-cutoff")?,
    })?;
    let zl = engine.find_zeros(count)?;
    let mut buf = Vec::new();
    zl.write_to(&mut buf)?;
    write_atomic(Path::new(out), &buf)?;
    let mut report = header(cfg, Some(&zl));
    report["engine"] = json!(engine.config());
    emit_json(cfg.path("json"), &report, stdout)?;
    Ok(())
}

fn classify(cfg: &RunConfig, stdout: &mut dyn Write) -> Res {
    let (alpha, class) = alpha_and_class(cfg)?;
    let mut report = header(cfg, None);
    report["alpha"] = json!(alpha);
    report["classification"] = class_json(&class);
    emit_json(cfg.path("json"), &report, stdout)?;
    Ok(())
}

fn density(cfg: &RunConfig, stdout: &mut dyn Write) -> Res {
    let (alpha, class) = alpha_and_class(cfg)?;
    let model = Density::from_class(&class)?;
    let samples = cfg.positive("samples")?;
    let rows = (0..samples).map(|i| {
        let t = i as f64 / samples as f64;
        vec![t, model.g(t), model.cumulative_g(t)]
    });
    write_atomic(Path::new(cfg.require("out")?), csv("t,g,G", rows).as_bytes())?;
    let mut report = header(cfg, None);
    report["alpha"] = json!(alpha);
    report["classification"] = class_json(&class);
    report["model"] = json!(model.kind());
    report["density"] = match model.b_constant() {
        Ok(b) => json!({
            "g_min": model.g_min()?,
            "integral_g_sq": b.integral_g_sq,
            "integral_g_sq_quadrature": b.integral_g_sq_quadrature,
            "max_abs_g_prime": b.max_abs_g_prime,
            "B": b.b,
            "discrepancy_constant": model.predicted_discrepancy(std::f64::consts::E * 2.0)?.constant,
        }),
        Err(_) => json!({
            "g_min": null, "integral_g_sq": 0.0, "max_abs_g_prime": 0.0, "B": null,
            "discrepancy_constant": 0.0,
            "note": "density is identically zero",
        }),
    };
    emit_json(cfg.path("json"), &report, stdout)?;
    Ok(())
}

fn weyl_rows(zl: &ZeroList, alpha: &AlphaSpec, jmax: usize, t: f64) -> Result<Vec<Value>, CliError> {
    let mut out = Vec::with_capacity(jmax);
    for j in 1..=jmax as i64 {
        let w = weyl_sum(zl, alpha, j, t)?;
        let predicted = weyl_prediction(alpha, j, t)?;
        out.push(json!({
            "j": j,
            "re": w.normalized.re,
            "im": w.normalized.im,
            "raw_re": w.raw.re,
            "raw_im": w.raw.im,
            "predicted_re": predicted,
        }));
    }
    Ok(out)
}

fn discrepancy_block(em: &EmpiricalMeasure, model: &Density) -> Result<Value, CliError> {
    let t = em.t();
    let d_star = em.star_discrepancy()?;
    let integral = em.integral_abs_m()?;
    let prediction = if t > std::f64::consts::E {
        Some(model.predicted_discrepancy(t)?)
    } else {
        None
    };
    let b = model.b_constant().ok().map(|b| b.b);
    Ok(json!({
        "T": t,
        "N": em.n_of_t(),
        "D_star": d_star,
        "D_star_times_logT": d_star * t.ln(),
        "sup_abs_M": em.sup_abs_m(),
        "predicted_discrepancy": prediction.map(|p| p.value),
        "predicted_is_little_o": prediction.map(|p| p.little_o),
        "integral_abs_M": integral,
        "B_alpha": b,
        "integral_abs_M_over_B": b.map(|b| integral / b),
        "phase_accuracy": em.phase_accuracy(),
        "truncated": em.truncated,
    }))
}

fn analyze(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Res {
    let zl = load_zeros(cfg, "zeros")?;
    let out = cfg.require("out")?;
    let (alpha, class) = alpha_and_class(cfg)?;
    let model = Density::from_class(&class)?;
    let t = height(cfg, &zl, stderr)?;
    let bins = cfg.require_int("bins")?;
    if bins < 2 {
        return Err(UsageError(format!("--bins must be at least 2, got {bins}")).into());
    }
    let em = fractional_parts(&zl, &alpha, t)?;
    let hist = em.histogram(bins as usize, Some(&model))?;
    let rows = hist.iter().map(|b| vec![b.bin_start, b.empirical, b.predicted]);
    write_atomic(Path::new(out), csv("bin_start,empirical,predicted", rows).as_bytes())?;
    if let Some(m_out) = cfg.path("m-out") {
        let m = em.m_report(cfg.positive("m-points")?)?;
        let rows = m.grid.iter().zip(&m.m_values).map(|(&y, &v)| vec![y, v]);
        write_atomic(m_out, csv("y,M", rows).as_bytes())?;
    }
    let mut report = header(cfg, Some(&zl));
    report["alpha"] = json!(alpha);
    report["classification"] = class_json(&class);
    let summary = discrepancy_block(&em, &model)?;
    for (k, v) in summary.as_object().expect("object") {
        report[k] = v.clone();
    }
    report["weyl"] = json!(weyl_rows(&zl, &alpha, cfg.positive("jmax")?, t)?);
    emit_json(cfg.path("json"), &report, stdout)?;
    Ok(())
}

fn weyl(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Res {
    let zl = load_zeros(cfg, "zeros")?;
    let alpha = parse_alpha(cfg.require("alpha")?)?;
    let t = height(cfg, &zl, stderr)?;
    let rows = weyl_rows(&zl, &alpha, cfg.positive("jmax")?, t)?;
    if let Some(out) = cfg.path("out") {
        let data = rows.iter().map(|r| {
            vec![
                r["j"].as_f64().unwrap_or(f64::NAN),
                r["re"].as_f64().unwrap_or(f64::NAN),
                r["im"].as_f64().unwrap_or(f64::NAN),
                r["predicted_re"].as_f64().unwrap_or(f64::NAN),
            ]
        });
        write_atomic(out, csv("j,re,im,predicted_re", data).as_bytes())?;
    }
    let mut report = header(cfg, Some(&zl));
    report["alpha"] = json!(alpha);
    report["T"] = json!(t);
    report["weyl"] = json!(rows);
    emit_json(cfg.path("json"), &report, stdout)?;
    Ok(())
}

fn landau(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Res {
    let zl = load_zeros(cfg, "zeros")?;
    let x = cfg.require_float("x")?;
    let t = height(cfg, &zl, stderr)?;
    let r = landau_compare(&zl, x, t, cfg.require_float("budget-constant")?)?;
    let mut report = header(cfg, Some(&zl));
    report["landau"] = json!(r);
    emit_json(cfg.path("json"), &report, stdout)?;
    if !r.within_budget {
        return Err(CliError::Check(format!(
            "|lhs - main term| is {:.3} times the error scale, above {}",
            r.ratio, r.budget_constant
        )));
    }
    Ok(())
}

fn discrepancy(cfg: &RunConfig, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Res {
    let zl = load_zeros(cfg, "zeros")?;
    let (alpha, class) = alpha_and_class(cfg)?;
    let model = Density::from_class(&class)?;
    let t = height(cfg, &zl, stderr)?;
    let em = fractional_parts(&zl, &alpha, t)?;
    let mut report = header(cfg, Some(&zl));
    report["alpha"] = json!(alpha);
    report["classification"] = class_json(&class);
    report["discrepancy"] = discrepancy_block(&em, &model)?;
    emit_json(cfg.path("json"), &report, stdout)?;
    Ok(())
}

fn parse_sequence(spec: &str) -> Result<Sequence, CliError> {
    match spec {
        "golden" => Ok(Sequence::Golden),
        "vandercorput" => Ok(Sequence::VanDerCorput),
        other => match other.strip_prefix("file:") {
            Some(path) => Ok(Sequence::from_file(Path::new(path))?),
            None => Err(UsageError(format!("unknown sequence {other:?}")).into()),
        },
    }
}

fn adversary(cfg: &RunConfig, stdout: &mut dyn Write) -> Res {
    let sequence = parse_sequence(cfg.require("sequence")?)?;
    let mode: BudgetMode = cfg.require("mode")?.parse()?;
    let levels = cfg.positive("levels")?;
    let n_max = cfg.require_int("n-max")?;
    if n_max < 1 {
        return Err(UsageError(format!("--n-max must be positive, got {n_max}")).into());
    }
    let mut c = AdversarialConstruction::new(cfg.require_float("t")?, Decay::parse(cfg.require("f")?)?, sequence, mode)?
        .with_n_max(n_max as u64);
    c.build(levels)?;
    let mut rows = Vec::with_capacity(levels);
    for (i, level) in c.levels().iter().enumerate() {
        let gap = c.verify_gap(i + 1)?;
        rows.push(json!({
            "k": level.k,
            "n_k": level.n_k,
            "v_k": level.v_k,
            "delta_k": level.delta_k,
            "epsilon_k": level.epsilon_k,
            "bump_count": level.bump_count(),
            "integral_Ik": level.integral_ik,
            "gap_lhs": gap.lhs,
            "uncertainty": gap.uncertainty,
            "f_nk": gap.f_nk,
            "holds": gap.holds,
            "guaranteed": gap.guaranteed,
            "analytic_bound": gap.analytic_bound,
            "terms": gap.terms,
        }));
    }
    let mut report = header(cfg, None);
    report["sequence"] = json!(c.sequence().name());
    report["f"] = json!(c.decay().to_string());
    report["levels"] = json!(rows);
    report["integral_h"] = json!(c.integral_h());
    emit_json(cfg.path("report"), &report, stdout)?;
    Ok(())
}
