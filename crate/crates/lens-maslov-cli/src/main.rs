//! `lens-maslov` — index computations on lens spaces from the command line.
//!
//! Every subcommand writes a plain-text report into `--out-dir` and prints a
//! one-line summary. Exit codes: 0 on success, 1 for usage problems (bad
//! flags, unreadable config, malformed input files), 2 when a computation
//! contradicts a guaranteed property — the "this should never happen" exit.
//!
//! A TOML file passed via `--config` *overrides* command-line flags: flags
//! are the quick interactive layer, the file is the durable record of a run.
//! Thread count comes from `LENS_MASLOV_THREADS` when set. Identical
//! configuration and seed produce byte-identical reports.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use lens_maslov::report::Report;
use lens_maslov_cli::commands::{self, RunContext};
use lens_maslov_cli::config::{
    self, CrossingsOpts, DefectSuiteOpts, HomologyOpts, IndexOpts, LinearMaslovOpts,
    PropertySuiteOpts, ReebMuOpts, TranslatedPointsOpts,
};
use lens_maslov_cli::{criteria, RunError};

#[derive(Parser)]
#[command(
    name = "lens-maslov",
    version,
    about = "Index computations on lens spaces: loops of symplectic matrices, \
             Reeb-type flows, equivariant cell models, and translated points"
)]
struct Cli {
    /// TOML config file; values in it override command-line flags
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Directory reports are written into
    #[arg(long, global = true, default_value = "reports", value_name = "DIR")]
    out_dir: PathBuf,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Index of a loop of symplectic matrices, with its tower endpoints
    LinearMaslov(LinearMaslovOpts),
    /// Index of l full Reeb turns on a lens space
    ReebMu(ReebMuOpts),
    /// Locate translated points of a contactomorphism numerically
    TranslatedPoints(TranslatedPointsOpts),
    /// Discriminant crossings of a contact flow and the index bounds they carry
    Crossings(CrossingsOpts),
    /// Homology and Bockstein ladder of an equivariant cell model
    EquivtopHomology(HomologyOpts),
    /// Cohomological index of a subcomplex, checked against the homology route
    EquivtopIndex(IndexOpts),
    /// Randomized index-property checks on seeded subcomplex pairs
    PropertySuite(PropertySuiteOpts),
    /// Quasimorphism defect of the index over random loop and path pairs
    DefectSuite(DefectSuiteOpts),
    /// Recompute every guaranteed value from scratch and write the pass/fail table
    Reproduce,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(RunError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(RunError::Contract(msg)) => {
            eprintln!("contract violation: {msg}");
            ExitCode::from(2)
        }
    }
}

fn threads_from_env() -> Result<Option<usize>, RunError> {
    match std::env::var("LENS_MASLOV_THREADS") {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(RunError::Usage(format!("LENS_MASLOV_THREADS: {e}"))),
        Ok(raw) => match raw.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(RunError::Usage(format!(
                "LENS_MASLOV_THREADS must be a positive integer, got {raw:?}"
            ))),
        },
    }
}

fn run(cli: Cli) -> Result<ExitCode, RunError> {
    let ctx = RunContext { threads: threads_from_env()? };
    std::fs::create_dir_all(&cli.out_dir).map_err(|e| {
        RunError::Usage(format!("cannot create {}: {e}", cli.out_dir.display()))
    })?;

    let config = cli.config.as_deref();
    let (name, out) = match cli.command {
        Command::Reproduce => return reproduce(&cli.out_dir),
        Command::LinearMaslov(o) => {
            ("linear-maslov", commands::linear_maslov(&config::merge(o, config)?, &ctx)?)
        }
        Command::ReebMu(o) => ("reeb-mu", commands::reeb_mu_cmd(&config::merge(o, config)?, &ctx)?),
        Command::TranslatedPoints(o) => (
            "translated-points",
            commands::translated_points_cmd(&config::merge(o, config)?, &ctx)?,
        ),
        Command::Crossings(o) => {
            ("crossings", commands::crossings(&config::merge(o, config)?, &ctx)?)
        }
        Command::EquivtopHomology(o) => (
            "equivtop-homology",
            commands::equivtop_homology(&config::merge(o, config)?, &ctx)?,
        ),
        Command::EquivtopIndex(o) => {
            ("equivtop-index", commands::equivtop_index(&config::merge(o, config)?, &ctx)?)
        }
        Command::PropertySuite(o) => {
            ("property-suite", commands::property_suite_cmd(&config::merge(o, config)?, &ctx)?)
        }
        Command::DefectSuite(o) => {
            ("defect-suite", commands::defect_suite(&config::merge(o, config)?, &ctx)?)
        }
    };

    let path = cli.out_dir.join(format!("{name}.txt"));
    std::fs::write(&path, out.report.to_text())
        .map_err(|e| RunError::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!("{name}: {}", out.summary);
    println!("report: {}", path.display());
    if let Some(violation) = out.violation {
        eprintln!("contract violation: {violation}");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

/// Recompute the full table of guaranteed values. The console shows timing;
/// the report file omits it so identical runs stay byte-identical.
fn reproduce(out_dir: &Path) -> Result<ExitCode, RunError> {
    let list = criteria::all();
    println!("recomputing {} guaranteed values", list.len());
    let mut outcomes = Vec::with_capacity(list.len());
    for criterion in list {
        let start = Instant::now();
        let check = criterion.run();
        let elapsed = start.elapsed();
        let outcome = criteria::Outcome {
            name: criterion.name,
            value: check.value,
            pass: check.pass,
            elapsed,
            budget: criterion.budget,
        };
        let status = if outcome.pass { "pass" } else { "FAIL" };
        let lateness = if outcome.within_budget() { "" } else { "  [over budget]" };
        println!(
            "{status}  {:<24} {:>8.2?}  {}{lateness}",
            outcome.name, outcome.elapsed, outcome.value
        );
        outcomes.push(outcome);
    }

    let passed = outcomes.iter().filter(|o| o.pass).count();
    let failed = outcomes.len() - passed;
    let mut report = Report::new("reproduce");
    for o in &outcomes {
        report.push(&format!("{}.value", o.name), &o.value);
        report.push(&format!("{}.pass", o.name), o.pass);
    }
    report.push("passed", passed);
    report.push("failed", failed);

    let path = out_dir.join("reproduce.txt");
    std::fs::write(&path, report.to_text())
        .map_err(|e| RunError::Usage(format!("cannot write {}: {e}", path.display())))?;
    println!("{passed}/{} guaranteed values reproduced", outcomes.len());
    println!("report: {}", path.display());
    if failed > 0 {
        eprintln!("contract violation: {failed} guaranteed values failed to reproduce");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}
