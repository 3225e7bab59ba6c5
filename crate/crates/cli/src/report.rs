use modnuc::audit::Check;
use modnuc::{Error, SpectralReport};
use serde::Serialize;
use serde_json::Value;

use crate::config::RunConfig;

pub const TOOL: &str = "modnuc";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    Violation,
    NotConverged,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
            Status::NotConverged => 3,
        }
    }
}

/// One JSON object per run. Contains no timestamps, so identical configs
/// give byte-identical reports.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: RunConfig,
    pub status: Status,
    pub passed: bool,
    /// Names of failed checks, or of the contract an error reports.
    pub violations: Vec<String>,
    pub error: Option<String>,
    pub checks: Vec<Check>,
    pub results: Value,
}

/// A named `index,value` table exported next to the report.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: String,
    pub values: Vec<f64>,
}

pub fn spectral_tables(r: &SpectralReport) -> Vec<Table> {
    [("sigma_phi", &r.sigma_phi), ("sigma_pi", &r.sigma_pi), ("t_values", &r.t_values)]
        .into_iter()
        .map(|(name, v)| Table {
            name: name.to_string(),
            values: v.clone(),
        })
        .collect()
}

/// Result of a command before it is wrapped in a [`Report`].
pub struct Computed {
    pub checks: Vec<Check>,
    pub results: Value,
    pub converged: bool,
    pub tables: Vec<Table>,
}

pub enum Disposition {
    Malformed(String),
    Report(Box<Report>, Vec<Table>),
}

/// Stable snake_case name of the contract behind an error.
pub fn error_name(e: &Error) -> &'static str {
    match e {
        Error::NotSquare { .. } => "not_square",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::NotUnitary { .. } => "not_unitary",
        Error::NotSymmetric { .. } => "not_symmetric",
        Error::NotGammaInvariant { .. } => "not_gamma_invariant",
        Error::NotHermitian { .. } => "not_hermitian",
        Error::NotPositive { .. } => "not_positive",
        Error::GammaCommutation { .. } => "gamma_commutation",
        Error::SingularValueTooLarge { .. } => "singular_value_too_large",
        Error::Capacity { .. } => "capacity",
        Error::MixedParity => "mixed_parity",
        Error::NotInRealSpan { .. } => "not_in_real_span",
        Error::NotSeparating => "not_separating",
        Error::ForeignPair => "foreign_pair",
        Error::WedgeCondition { .. } => "wedge_condition",
        Error::NonIntegrableDamping { .. } => "non_integrable_damping",
        Error::GridResolution { .. } => "grid_resolution",
        Error::EmptySubspace => "empty_subspace",
        Error::InvalidParameter(_) => "invalid_parameter",
    }
}

pub fn assemble(config: &RunConfig, computed: modnuc::Result<Computed>) -> Disposition {
    let base = |status, violations, error, checks, results| Report {
        tool: TOOL,
        version: VERSION,
        command: config.command.clone(),
        config: config.clone(),
        status,
        passed: status == Status::Ok,
        violations,
        error,
        checks,
        results,
    };
    match computed {
        Ok(c) => {
            let violations: Vec<String> = c.checks.iter().filter(|k| !k.passed).map(|k| k.name.clone()).collect();
            let status = if !c.converged {
                Status::NotConverged
            } else if violations.is_empty() {
                Status::Ok
            } else {
                Status::Violation
            };
            Disposition::Report(Box::new(base(status, violations, None, c.checks, c.results)), c.tables)
        }
        Err(e @ (Error::InvalidParameter(_) | Error::Capacity { .. })) => Disposition::Malformed(e.to_string()),
        Err(e) => {
            let status = if matches!(e, Error::GridResolution { .. }) {
                Status::NotConverged
            } else {
                Status::Violation
            };
            let report = base(status, vec![error_name(&e).to_string()], Some(e.to_string()), Vec::new(), Value::Null);
            Disposition::Report(Box::new(report), Vec::new())
        }
    }
}

pub fn to_json(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}
