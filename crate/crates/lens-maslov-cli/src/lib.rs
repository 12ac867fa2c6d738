//! Command-line surface for the `lens-maslov` library.
//!
//! The binary parses one subcommand, merges its flags with an optional TOML
//! config file ([`config`]), runs the computation ([`commands`]), writes a
//! structured-text report under the output directory, and prints a one-line
//! summary. [`criteria`] packages every guaranteed value the library ships
//! into ten named checks; the `reproduce` subcommand tabulates them and the
//! `acceptance` test target asserts them.

pub mod commands;
pub mod config;
pub mod criteria;

/// How a run can fail, split by exit code.
///
/// Usage errors (exit 1) are the caller's to fix: unreadable files, bad
/// flags, parameters the library rejects up front. Contract violations
/// (exit 2) mean a value the mathematics guarantees failed to hold or to
/// certify — CI should read those as regressions, not misconfiguration.
#[derive(Debug)]
pub enum RunError {
    Usage(String),
    Contract(String),
}

impl From<lens_maslov::Error> for RunError {
    fn from(e: lens_maslov::Error) -> Self {
        use lens_maslov::Error::*;
        match e {
            // A guaranteed computation failed to certify: the no-holes rank
            // profile broke, a generator stopped being a cocycle, or a
            // numerical certificate (endpoint kernel, loop closure) was
            // refused. On library-built inputs these are never the caller's
            // fault.
            Numerical(_) | IndexShape(_) | NotCocycle(_) => RunError::Contract(e.to_string()),
            // Everything else is rejected input.
            _ => RunError::Usage(e.to_string()),
        }
    }
}

/// What a subcommand hands back to `main` for persistence.
#[derive(Debug)]
pub struct CommandOutput {
    pub report: lens_maslov::report::Report,
    /// One console line, printed next to the report path.
    pub summary: String,
    /// Set when a guaranteed property failed on this run. The report is
    /// still written — a violation certificate is the most valuable report
    /// of all — but the process exits 2.
    pub violation: Option<String>,
}
