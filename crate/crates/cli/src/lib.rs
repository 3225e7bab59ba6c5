//! Command-line driver for the `modnuc` audits and reports: argument and
//! config-file parsing, JSON and CSV output, and the golden-value harness.

pub mod args;
mod commands;
pub mod config;
pub mod golden;
pub mod output;
pub mod report;

use std::ffi::OsString;

pub use commands::execute;
pub use config::{parse, Malformed, ParseExit, RunConfig};
pub use report::{Report, Status};

pub const THREADS_ENV: &str = "NUCLEARITY_THREADS";

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| format!("{THREADS_ENV} = {raw:?} is not a positive integer"))?;
    // a pool built earlier in the same process keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parse, run and write outputs; returns the process exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match run_inner(args) {
        Ok(code) => code,
        Err(message) => {
            eprintln!("modnuc: {message}");
            2
        }
    }
}

fn run_inner<I, T>(args: I) -> Result<i32, String>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    configure_threads()?;
    let config = match parse(args) {
        Ok(c) => c,
        Err(ParseExit::Display(text)) => {
            print!("{text}");
            return Ok(0);
        }
        Err(ParseExit::Malformed(m)) => return Err(m.0),
    };
    let (report, tables) = match report::assemble(&config, execute(&config)?) {
        report::Disposition::Malformed(m) => return Err(m),
        report::Disposition::Report(r, t) => (r, t),
    };
    let json = report::to_json(&report);
    match &config.output {
        Some(path) => output::write_atomic(path, json.as_bytes()).map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{json}"),
    }
    if let Some(dir) = &config.csv {
        if tables.is_empty() {
            return Err(format!("`{}` produces no numeric tables for --csv", config.command));
        }
        output::write_tables(dir, &tables).map_err(|e| format!("cannot write tables to {}: {e}", dir.display()))?;
    }
    let summary = match report.status {
        Status::Ok => "ok".to_string(),
        Status::Violation => format!("violated: {}", report.violations.join(", ")),
        Status::NotConverged => "quadrature did not converge".to_string(),
    };
    eprintln!("{}: {summary}", config.command);
    Ok(report.status.exit_code())
}

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
