use thiserror::Error;

/// Everything that can go wrong in the library.
///
/// Variants fall into two families: bad or inconsistent input data, and
/// numerical checks that disagreed with theory. [`Error::is_numerical`] tells
/// them apart so front ends can report them differently.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input")]
    EmptyInput,

    #[error("line {line}: cannot parse {text:?} as an ordinate")]
    Parse { line: usize, text: String },

    #[error("line {line}: ordinate {value} is below the previous ordinate {previous} by more than the tolerance")]
    Ordering {
        line: usize,
        value: f64,
        previous: f64,
    },

    #[error("line {line}: ordinate {value} does not exceed 14")]
    BelowFirstZero { line: usize, value: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("value must be positive, got {0}")]
    NonPositive(f64),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("zero count mismatch near height {height}: found {found}, expected {expected}")]
    CountMismatch {
        height: f64,
        found: usize,
        expected: usize,
    },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("level {k} infeasible at budget: {diagnostics}")]
    Infeasible { k: usize, diagnostics: String },

    #[error("sequence is not equidistributed: |mean e(m a_n)| = {magnitude:.4} at m = {m}")]
    NotEquidistributed { m: i64, magnitude: f64 },

    #[error("level {0} has not been built")]
    LevelNotBuilt(usize),

    #[error("numerical assertion failed: {0}")]
    Assertion(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True when the error reports a numerical disagreement rather than bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::CountMismatch { .. }
                | Error::NonConvergence(_)
                | Error::Infeasible { .. }
                | Error::NotEquidistributed { .. }
                | Error::Assertion(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
