//! Zero ordinate lists: ingestion, counting and the Riemann-von Mangoldt check.

use std::f64::consts::PI;
use std::fmt;
use std::io::{BufRead, Write};

use serde::Serialize;

use crate::error::{Error, Result};

/// Default per-ordinate accuracy for tables printed with nine decimals.
pub const DEFAULT_ACCURACY: f64 = 5e-10;

/// Default constant in the `|N(T) - main(T)| <= C log T` diagnostic.
pub const DEFAULT_RESIDUAL_C: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroFormat {
    /// One ordinate per line, `#` comments.
    Plain,
    /// Like plain, but blank lines and a leading integer index column are tolerated.
    Odlyzko,
}

impl std::str::FromStr for ZeroFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(ZeroFormat::Plain),
            "odlyzko" => Ok(ZeroFormat::Odlyzko),
            other => Err(Error::Config(format!("unknown zero format {other:?}"))),
        }
    }
}

/// Where a list of ordinates came from.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", content = "detail", rename_all = "lowercase")]
pub enum Provenance {
    Ingested(String),
    Computed(String),
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Ingested(p) => write!(f, "ingested:{p}"),
            Provenance::Computed(c) => write!(f, "computed:{c}"),
        }
    }
}

/// Validated ascending list of zero ordinates.
#[derive(Debug, Clone)]
pub struct ZeroList {
    ordinates: Vec<f64>,
    source: Provenance,
    accuracy: f64,
    near_duplicates: Vec<usize>,
}

/// Result of [`ZeroList::count_upto`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UptoCount {
    pub count: usize,
    /// Set when `T` lies beyond the end of the list, so `count` is only a lower bound.
    pub truncated: bool,
}

impl ZeroList {
    /// Builds a list from ordinates already in memory, applying the same
    /// validation as [`ingest_zeros`]. Line numbers in errors are 1-based indices.
    pub fn from_ordinates(ordinates: Vec<f64>, source: Provenance, accuracy: f64) -> Result<Self> {
        if !(accuracy > 0.0) {
            return Err(Error::Domain(format!("accuracy must be positive, got {accuracy}")));
        }
        if ordinates.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut near_duplicates = Vec::new();
        for (i, &v) in ordinates.iter().enumerate() {
            if !(v > 14.0) || !v.is_finite() {
                return Err(Error::BelowFirstZero { line: i + 1, value: v });
            }
            if i > 0 {
                let prev = ordinates[i - 1];
                if v < prev - 2.0 * accuracy {
                    return Err(Error::Ordering {
                        line: i + 1,
                        value: v,
                        previous: prev,
                    });
                }
                if (v - prev).abs() <= 2.0 * accuracy {
                    near_duplicates.push(i);
                }
            }
        }
        Ok(ZeroList {
            ordinates,
            source,
            accuracy,
            near_duplicates,
        })
    }

    pub fn ordinates(&self) -> &[f64] {
        &self.ordinates
    }

    pub fn count(&self) -> usize {
        self.ordinates.len()
    }

    pub fn accuracy(&self) -> f64 {
        self.accuracy
    }

    pub fn source(&self) -> &Provenance {
        &self.source
    }

    pub fn last(&self) -> f64 {
        *self.ordinates.last().expect("lists are never empty")
    }

    /// Indices (0-based) of ordinates within `2·accuracy` of their predecessor.
    pub fn near_duplicates(&self) -> &[usize] {
        &self.near_duplicates
    }

    /// Ordinates `γ <= t`.
    pub fn upto(&self, t: f64) -> &[f64] {
        &self.ordinates[..self.count_upto(t).count]
    }

    /// Number of ordinates `<= t`, by binary search.
    pub fn count_upto(&self, t: f64) -> UptoCount {
        let count = self.ordinates.partition_point(|&g| g <= t);
        UptoCount {
            count,
            truncated: t > self.last() + self.accuracy,
        }
    }

    /// Writes the list in plain format behind a one-line provenance header.
    pub fn write_to<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(
            w,
            "# accuracy={} count={} source={}",
            self.accuracy,
            self.count(),
            self.source
        )?;
        for g in &self.ordinates {
            writeln!(w, "{g}")?;
        }
        Ok(())
    }
}

/// Reads ordinates from a line-oriented text source.
pub fn ingest_zeros<R: BufRead>(
    reader: R,
    format: ZeroFormat,
    accuracy: f64,
    source: Provenance,
) -> Result<ZeroList> {
    let mut ordinates = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.starts_with('#') {
            continue;
        }
        if trimmed.is_empty() {
            if format == ZeroFormat::Odlyzko {
                continue;
            }
            return Err(Error::Parse {
                line: lineno,
                text: line.clone(),
            });
        }
        let field = match format {
            ZeroFormat::Plain => trimmed,
            ZeroFormat::Odlyzko => {
                let mut parts = trimmed.split_whitespace();
                let first = parts.next().unwrap_or("");
                match (parts.next(), parts.next()) {
                    (Some(second), None) if first.parse::<u64>().is_ok() => second,
                    (None, _) => first,
                    _ => {
                        return Err(Error::Parse {
                            line: lineno,
                            text: line.clone(),
                        })
                    }
                }
            }
        };
        let value: f64 = field.parse().map_err(|_| Error::Parse {
            line: lineno,
            text: line.clone(),
        })?;
        if !(value > 0.0) || !value.is_finite() {
            return Err(Error::Parse {
                line: lineno,
                text: line.clone(),
            });
        }
        if let Some(&prev) = ordinates.last() {
            if value < prev - 2.0 * accuracy {
                return Err(Error::Ordering {
                    line: lineno,
                    value,
                    previous: prev,
                });
            }
        }
        if value <= 14.0 {
            return Err(Error::BelowFirstZero { line: lineno, value });
        }
        ordinates.push(value);
    }
    ZeroList::from_ordinates(ordinates, source, accuracy)
}

/// Reads the `accuracy=` field of a store header, if the first line carries one.
pub fn header_accuracy(first_line: &str) -> Option<f64> {
    let rest = first_line.trim().strip_prefix('#')?;
    rest.split_whitespace()
        .find_map(|kv| kv.strip_prefix("accuracy="))
        .and_then(|v| v.parse().ok())
}

/// Main term of the Riemann-von Mangoldt formula, `(T/2π)log(T/2π) - T/2π`.
pub fn rvm_main_term(t: f64) -> Result<f64> {
    if !(t >= 1.0) {
        return Err(Error::Domain(format!("main term needs T >= 1, got {t}")));
    }
    let u = t / (2.0 * PI);
    Ok(u * u.ln() - u)
}

#[derive(Debug, Clone, Serialize)]
pub struct ZeroCountReport {
    #[serde(rename = "T")]
    pub t: f64,
    pub exact: usize,
    pub main_term: f64,
    pub residual: f64,
    /// `|residual| > C log T`.
    pub flagged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Validation {
    pub reports: Vec<ZeroCountReport>,
    pub near_duplicates: Vec<usize>,
}

impl Validation {
    pub fn is_clean(&self) -> bool {
        self.near_duplicates.is_empty() && self.reports.iter().all(|r| !r.flagged)
    }
}

/// Compares `N(T)` against the main term at each grid point.
pub fn validate(zl: &ZeroList, grid: &[f64], c: f64) -> Validation {
    let reports = grid
        .iter()
        .filter(|&&t| t >= 1.0)
        .map(|&t| {
            let exact = zl.count_upto(t).count;
            let main_term = rvm_main_term(t).expect("grid filtered to T >= 1");
            let residual = exact as f64 - main_term;
            ZeroCountReport {
                t,
                exact,
                main_term,
                residual,
                flagged: residual.abs() > c * t.ln(),
            }
        })
        .collect();
    Validation {
        reports,
        near_duplicates: zl.near_duplicates.clone(),
    }
}

/// `points` logarithmically spaced heights from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    match points {
        0 => Vec::new(),
        1 => vec![hi],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..points)
                .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
                .collect()
        }
    }
}
