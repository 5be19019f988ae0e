//! Flag and config-file resolution.
//!
//! Every subcommand declares its keys in a schema. Values come from
//! `--key value` flags, then from an optional `key = value` file named by
//! `--config`, then from the schema default; the winning source is kept so
//! reports can say where each setting came from.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Int,
    Float,
    Text,
    Choice(&'static [&'static str]),
}

#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn key(name: &'static str, kind: Kind, default: Option<&'static str>, help: &'static str) -> Key {
    Key {
        name,
        kind,
        default,
        help,
    }
}

const FORMATS: &[&str] = &["plain", "odlyzko"];
const MODES: &[&str] = &["paper", "tightened"];

const THREADS: Key = key("threads", Kind::Int, Some("0"), "worker threads, 0 = automatic");
const ALPHA: Key = key("alpha", Kind::Text, None, "scaling constant, e.g. \"log(2)/(2*pi)\"");
const PMAX: Key = key("pmax", Kind::Int, Some("1000"), "largest prime in the resonance search");
const AMAX: Key = key("amax", Kind::Int, Some("100"), "largest numerator a");
const QMAX: Key = key("qmax", Kind::Int, Some("100"), "largest denominator q");
const ALPHA_TOL: Key = key("alpha-tol", Kind::Float, Some("1e-20"), "resonance tolerance");
const ZEROS: Key = key("zeros", Kind::Text, None, "zero ordinate file");
const FORMAT: Key = key("format", Kind::Choice(FORMATS), Some("plain"), "zero file format");
const ACCURACY: Key = key("accuracy", Kind::Float, None, "per-ordinate accuracy (default: file header or 5e-10)");
const HEIGHT: Key = key("T", Kind::Float, None, "height T (default: last ordinate)");
const JSON: Key = key("json", Kind::Text, None, "JSON report path (default: standard output)");

#[derive(Debug)]
pub struct Command {
    pub name: &'static str,
    pub about: &'static str,
    pub keys: &'static [Key],
}

pub const COMMANDS: &[Command] = &[
    Command {
        name: "zeros-ingest",
        about: "validate a zero table against the Riemann-von Mangoldt count",
        keys: &[
            THREADS,
            key("input", Kind::Text, None, "zero table to read"),
            FORMAT,
            ACCURACY,
            key("residual-c", Kind::Float, Some("2"), "flag |N(T) - main(T)| > C log T"),
            key("grid-points", Kind::Int, Some("20"), "heights checked, log spaced"),
            key("out", Kind::Text, None, "optional normalized copy of the list"),
            JSON,
        ],
    },
    Command {
        name: "zeros-compute",
        about: "compute the first N zero ordinates",
        keys: &[
            THREADS,
            key("count", Kind::Int, None, "number of zeros"),
            key("out", Kind::Text, None, "output zero file"),
            key("target-accuracy", Kind::Float, Some("1e-8"), "bisection accuracy"),
            key("max-height", Kind::Float, Some("100000"), "refuse to go beyond this height"),
            key("correction-order", Kind::Int, Some("4"), "Riemann-Siegel correction terms (0-4)"),
            key("low-t-cutoff", Kind::Float, Some("200"), "Euler-Maclaurin below this height"),
            JSON,
        ],
    },
    Command {
        name: "classify",
        about: "classify alpha as resonant or generic",
        keys: &[THREADS, ALPHA, PMAX, AMAX, QMAX, ALPHA_TOL, JSON],
    },
    Command {
        name: "density",
        about: "tabulate the limiting density g and its integral G",
        keys: &[
            THREADS,
            ALPHA,
            PMAX,
            AMAX,
            QMAX,
            ALPHA_TOL,
            key("samples", Kind::Int, Some("1000"), "grid points"),
            key("out", Kind::Text, None, "CSV t,g,G"),
            JSON,
        ],
    },
    Command {
        name: "analyze",
        about: "histogram, discrepancy and Weyl sums of {alpha gamma}",
        keys: &[
            THREADS,
            ALPHA,
            PMAX,
            AMAX,
            QMAX,
            ALPHA_TOL,
            ZEROS,
            FORMAT,
            ACCURACY,
            HEIGHT,
            key("bins", Kind::Int, Some("500"), "histogram bins"),
            key("jmax", Kind::Int, Some("8"), "Weyl sums for j = 1..jmax"),
            key("out", Kind::Text, None, "CSV bin_start,empirical,predicted"),
            key("m-out", Kind::Text, None, "optional CSV y,M"),
            key("m-points", Kind::Int, Some("1000"), "grid intervals for --m-out"),
            JSON,
        ],
    },
    Command {
        name: "weyl",
        about: "normalized Weyl sums against the Landau prediction",
        keys: &[
            THREADS,
            ALPHA,
            ZEROS,
            FORMAT,
            ACCURACY,
            HEIGHT,
            key("jmax", Kind::Int, Some("8"), "j = 1..jmax"),
            key("out", Kind::Text, None, "optional CSV j,re,im,predicted_re"),
            JSON,
        ],
    },
    Command {
        name: "landau",
        about: "compare a zero sum with the uniform Landau formula",
        keys: &[
            THREADS,
            key("x", Kind::Float, None, "x > 1"),
            ZEROS,
            FORMAT,
            ACCURACY,
            HEIGHT,
            key("budget-constant", Kind::Float, Some("4"), "allowed ratio to the error scale"),
            JSON,
        ],
    },
    Command {
        name: "discrepancy",
        about: "star discrepancy and the integral of |M|",
        keys: &[
            THREADS,
            ALPHA,
            PMAX,
            AMAX,
            QMAX,
            ALPHA_TOL,
            ZEROS,
            FORMAT,
            ACCURACY,
            HEIGHT,
            JSON,
        ],
    },
    Command {
        name: "adversary",
        about: "build the adversarial bump function level by level",
        keys: &[
            THREADS,
            key("sequence", Kind::Text, Some("golden"), "golden, vandercorput or file:<path>"),
            key("t", Kind::Float, Some("0"), "point t in [0, 1)"),
            key("f", Kind::Text, Some("n^(-2)"), "decay function of n"),
            key("levels", Kind::Int, Some("4"), "levels to build"),
            key("mode", Kind::Choice(MODES), Some("tightened"), "budget mode"),
            key("n-max", Kind::Int, Some("100000000"), "scan cap per level"),
            key("report", Kind::Text, None, "JSON report path (default: standard output)"),
        ],
    },
];

/// Usage problems: exit code 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Flag,
    File,
    Default,
}

#[derive(Debug, Clone, Serialize)]
pub struct Resolved {
    pub value: String,
    pub source: Source,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static Command,
    pub values: BTreeMap<&'static str, Resolved>,
    pub config_file: Option<PathBuf>,
}

fn check_kind(k: &Key, value: &str) -> Result<(), UsageError> {
    let ok = match k.kind {
        Kind::Int => value.parse::<i64>().is_ok(),
        Kind::Float => value.parse::<f64>().is_ok_and(f64::is_finite),
        Kind::Text => true,
        Kind::Choice(options) => options.contains(&value),
    };
    if ok {
        Ok(())
    } else {
        let expected = match k.kind {
            Kind::Int => "an integer".to_string(),
            Kind::Float => "a number".to_string(),
            Kind::Choice(options) => format!("one of {}", options.join(", ")),
            Kind::Text => unreachable!(),
        };
        Err(usage(format!("--{} expects {expected}, got {value:?}", k.name)))
    }
}

/// Parses `key = value` lines. Blank lines and `#` comments are skipped.
pub fn load_config(text: &str) -> Result<Vec<(usize, String, String)>, UsageError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(usage(format!("config line {}: expected `key = value`, got {raw:?}", i + 1)));
        };
        let (k, v) = (k.trim(), v.trim());
        if k.is_empty() {
            return Err(usage(format!("config line {}: missing key", i + 1)));
        }
        out.push((i + 1, k.to_string(), v.trim_matches('"').to_string()));
    }
    Ok(out)
}

pub fn find_command(name: &str) -> Option<&'static Command> {
    COMMANDS.iter().find(|c| c.name == name)
}

/// Resolves `argv` (without the program name) into a typed-checked config.
pub fn parse_args(argv: &[String]) -> Result<RunConfig, UsageError> {
    let Some(name) = argv.first() else {
        return Err(usage("missing subcommand"));
    };
    let command = find_command(name).ok_or_else(|| usage(format!("unknown subcommand {name:?}")))?;
    let lookup = |k: &str| command.keys.iter().find(|key| key.name == k);

    let mut flags: BTreeMap<&'static str, String> = BTreeMap::new();
    let mut config_file = None;
    let mut rest = argv[1..].iter();
    while let Some(arg) = rest.next() {
        let Some(name) = arg.strip_prefix("--") else {
            return Err(usage(format!("unexpected argument {arg:?}; flags are --key value")));
        };
        let (name, inline) = match name.split_once('=') {
            Some((n, v)) => (n, Some(v.to_string())),
            None => (name, None),
        };
        let value = match inline {
            Some(v) => v,
            None => rest
                .next()
                .cloned()
                .ok_or_else(|| usage(format!("--{name} needs a value")))?,
        };
        if name == "config" {
            config_file = Some(PathBuf::from(value));
            continue;
        }
        let key = lookup(name).ok_or_else(|| usage(format!("unknown flag --{name} for {}", command.name)))?;
        if flags.insert(key.name, value).is_some() {
            return Err(usage(format!("--{name} given twice")));
        }
    }

    let mut file_values: BTreeMap<&'static str, String> = BTreeMap::new();
    if let Some(path) = &config_file {
        let text = std::fs::read_to_string(path)
            .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
        for (line, k, v) in load_config(&text)? {
            let key = lookup(&k)
                .ok_or_else(|| usage(format!("config line {line}: unknown key {k:?} for {}", command.name)))?;
            check_kind(key, &v).map_err(|e| usage(format!("config line {line}: {e}")))?;
            file_values.insert(key.name, v);
        }
    }

    let mut values = BTreeMap::new();
    for key in command.keys {
        let resolved = if let Some(v) = flags.remove(key.name) {
            check_kind(key, &v)?;
            Resolved { value: v, source: Source::Flag }
        } else if let Some(v) = file_values.remove(key.name) {
            Resolved { value: v, source: Source::File }
        } else if let Some(d) = key.default {
            Resolved {
                value: d.to_string(),
                source: Source::Default,
            }
        } else {
            continue;
        };
        values.insert(key.name, resolved);
    }
    Ok(RunConfig {
        command,
        values,
        config_file,
    })
}

impl RunConfig {
    pub fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(|r| r.value.as_str())
    }

    pub fn require(&self, name: &str) -> Result<&str, UsageError> {
        self.get(name)
            .ok_or_else(|| usage(format!("{} requires --{name}", self.command.name)))
    }

    pub fn float(&self, name: &str) -> Result<Option<f64>, UsageError> {
        self.get(name)
            .map(|v| v.parse().map_err(|_| usage(format!("--{name}: bad number {v:?}"))))
            .transpose()
    }

    pub fn int(&self, name: &str) -> Result<Option<i64>, UsageError> {
        self.get(name)
            .map(|v| v.parse().map_err(|_| usage(format!("--{name}: bad integer {v:?}"))))
            .transpose()
    }

    pub fn require_float(&self, name: &str) -> Result<f64, UsageError> {
        self.require(name)?;
        Ok(self.float(name)?.expect("present"))
    }

    pub fn require_int(&self, name: &str) -> Result<i64, UsageError> {
        self.require(name)?;
        Ok(self.int(name)?.expect("present"))
    }

    pub fn positive(&self, name: &str) -> Result<usize, UsageError> {
        let v = self.require_int(name)?;
        if v < 1 {
            return Err(usage(format!("--{name} must be at least 1, got {v}")));
        }
        Ok(v as usize)
    }

    pub fn path(&self, name: &str) -> Option<&Path> {
        self.get(name).map(Path::new)
    }
}

pub fn help_text() -> String {
    let mut s = String::from("usage: zerodist <subcommand> [--key value]... [--config file]\n\n");
    for c in COMMANDS {
        s.push_str(&format!("{}\n    {}\n", c.name, c.about));
        for k in c.keys {
            let d = k.default.map(|d| format!(" [default: {d}]")).unwrap_or_default();
            s.push_str(&format!("    --{:<18}{}{}\n", k.name, k.help, d));
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn defaults_and_flags() {
        let c = parse_args(&args(&["analyze", "--alpha", "1", "--bins", "10"])).unwrap();
        assert_eq!(c.get("bins"), Some("10"));
        assert_eq!(c.values["bins"].source, Source::Flag);
        assert_eq!(c.values["jmax"].source, Source::Default);
        assert!(c.get("zeros").is_none());
        assert!(c.require("zeros").is_err());
    }

    #[test]
    fn rejects_bad_flags() {
        assert!(parse_args(&args(&["analyze", "--colour", "red"])).is_err());
        assert!(parse_args(&args(&["analyze", "--bins", "ten"])).is_err());
        assert!(parse_args(&args(&["analyze", "--bins"])).is_err());
        assert!(parse_args(&args(&["analyze", "-b", "3"])).is_err());
        assert!(parse_args(&args(&["analyze", "--format", "csv"])).is_err());
        assert!(parse_args(&args(&["frobnicate"])).is_err());
        assert!(parse_args(&[]).is_err());
    }

    #[test]
    fn config_lines() {
        assert!(load_config("").unwrap().is_empty());
        let v = load_config("# c\nbins = 500\n\n alpha = \"log(2)\" # trailing\n").unwrap();
        assert_eq!(v[0], (2, "bins".into(), "500".into()));
        assert_eq!(v[1].2, "log(2)");
        let e = load_config("bins = 5\nbins 500\n").unwrap_err();
        assert!(e.0.contains("line 2"), "{e}");
    }
}
