//! Command-line front end for `zerodist`.
//!
//! Exit codes: 0 success, 1 usage error, 2 bad input data, 3 a numerical
//! check disagreed with theory.

pub mod config;
mod commands;
pub mod output;

use std::io::Write;

use config::{parse_args, UsageError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Errors surfaced by a subcommand.
#[derive(Debug)]
pub enum CliError {
    Usage(UsageError),
    Lib(zerodist::Error),
    /// A report was written but its numerical check failed.
    Check(String),
    /// Input data failed validation.
    Invalid(String),
}

impl From<UsageError> for CliError {
    fn from(e: UsageError) -> Self {
        CliError::Usage(e)
    }
}

impl From<zerodist::Error> for CliError {
    fn from(e: zerodist::Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(e.into())
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Lib(zerodist::Error::Config(_)) => EXIT_USAGE,
            CliError::Lib(e) if e.is_numerical() => EXIT_NUMERICAL,
            CliError::Lib(_) => EXIT_DATA,
            CliError::Check(_) => EXIT_NUMERICAL,
            CliError::Invalid(_) => EXIT_DATA,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(e) => format!("usage error: {e}"),
            CliError::Lib(e) => format!("error: {e}"),
            CliError::Check(m) => format!("check failed: {m}"),
            CliError::Invalid(m) => format!("invalid data: {m}"),
        }
    }
}

/// Runs one invocation; `argv` excludes the program name.
pub fn run_with(argv: &[String], stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    if argv.is_empty() || matches!(argv[0].as_str(), "help" | "--help") {
        let _ = stdout.write_all(config::help_text().as_bytes());
        return if argv.is_empty() { EXIT_USAGE } else { EXIT_OK };
    }
    let result = parse_args(argv).map_err(CliError::from).and_then(|cfg| {
        let threads = cfg.int("threads")?.unwrap_or(0);
        if threads < 0 {
            return Err(UsageError(format!("--threads must be >= 0, got {threads}")).into());
        }
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads as usize)
            .build()
            .map_err(|e| UsageError(format!("cannot start thread pool: {e}")))?;
        // writers are buffered so the command can run inside the pool
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let result = pool.install(|| commands::dispatch(&cfg, &mut out, &mut err));
        stdout.write_all(&out)?;
        stderr.write_all(&err)?;
        result
    });
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "{}", e.message());
            e.exit_code()
        }
    }
}

/// Runs with the process's standard streams.
pub fn run(argv: &[String]) -> i32 {
    let mut out = std::io::stdout().lock();
    let mut err = std::io::stderr().lock();
    run_with(argv, &mut out, &mut err)
}
