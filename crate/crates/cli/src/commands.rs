use modnuc::audit::{self, AuditOutcome, Check};
use modnuc::ising;
use modnuc::{Point, RapidityGrid, WedgeScenario};
use serde_json::{json, Value};

use crate::config::{Parameters, RunConfig};
use crate::golden;
use crate::output::write_atomic;
use crate::report::{spectral_tables, Computed};

fn audit_results(out: AuditOutcome) -> Computed {
    let results = json!({
        "suite": out.suite,
        "instances": out.instances,
        "seed": out.seed,
        "metrics": out.metrics,
    });
    Computed {
        checks: out.checks,
        results,
        converged: true,
        tables: Vec::new(),
    }
}

/// Check values recorded as metrics so the report lists the worst
/// residuals even when every check passed.
fn with_values(mut out: AuditOutcome) -> AuditOutcome {
    for c in &out.checks {
        out.metrics.entry(c.name.clone()).or_insert(c.value);
    }
    out
}

/// Run the configured command. Golden commands read or write the fixture
/// file as a side effect.
pub fn execute(config: &RunConfig) -> Result<modnuc::Result<Computed>, String> {
    let tol = config.tolerances;
    let audited = |r: modnuc::Result<AuditOutcome>| r.map(|o| audit_results(with_values(o)));
    Ok(match config.parameters.clone() {
        Parameters::Car { modes, trials, seed } => {
            let dims: Vec<usize> = (1..=modes).collect();
            audited(audit::car_audit(&dims, trials, seed, &tol))
        }
        Parameters::Derivations {
            modes,
            instances,
            degree,
            seed,
        } => audited(audit::derivation_audit(instances, modes, degree, seed, &tol)),
        Parameters::Expansion {
            modes,
            instances,
            order,
            degree,
            seed,
        } => audited(if config.command == "verify identity" {
            audit::identity_audit(instances, modes, order, degree, seed, &tol)
        } else {
            audit::estimate_audit(instances, modes, order, degree, seed, &tol)
        }),
        Parameters::Bound {
            modes,
            instances,
            samples,
            seed,
        } => audited(audit::bound_audit(instances, modes, samples, seed, &tol)),
        Parameters::FermiBose {
            modes,
            trials,
            max_norm,
            seed,
        } => audited(audit::fermi_bose_audit(trials, modes, max_norm, seed)),
        Parameters::Intersect { .. } => audit::nested_fixture()
            .and_then(|(outer, inner)| audit::intersection_audit(&outer, &inner, &tol))
            .map(|(out, _)| audit_results(out)),
        Parameters::Ising {
            mass,
            x0,
            x1,
            basis,
            kappa,
            theta_max,
            n_points,
        } => ising_run(mass, Point::new(x0, x1), basis, kappa, theta_max, n_points),
        Parameters::Energy {
            mass,
            beta,
            basis,
            kappa,
            theta_max,
            n_points,
        } => energy_run(mass, beta, basis, kappa, theta_max, n_points),
        Parameters::Golden { write, fixture } => {
            let fresh = match golden::compute() {
                Ok(f) => f,
                Err(e) => return Ok(Err(e)),
            };
            let checks = if write {
                write_atomic(&fixture, golden::to_json(&fresh).as_bytes())
                    .map_err(|e| format!("cannot write {}: {e}", fixture.display()))?;
                Vec::new()
            } else {
                golden::compare(&golden::load(&fixture)?, &fresh)
            };
            Ok(Computed {
                checks,
                results: json!({ "fixture": fixture, "values": fresh }),
                converged: true,
                tables: Vec::new(),
            })
        }
    })
}

fn ising_run(mass: f64, x: Point, basis: usize, kappa: f64, theta_max: f64, n_points: usize) -> modnuc::Result<Computed> {
    let grid = RapidityGrid::new(theta_max, n_points)?;
    let scenario = WedgeScenario::new(mass, x, basis, kappa, grid)?;
    let (out, report) = audit::ising_audit(&scenario)?;
    Ok(Computed {
        converged: report.converged,
        tables: spectral_tables(&report),
        results: json!({ "report": report, "metrics": out.metrics }),
        checks: out.checks,
    })
}

fn energy_run(mass: f64, beta: f64, basis: usize, kappa: f64, theta_max: f64, n_points: usize) -> modnuc::Result<Computed> {
    let grid = RapidityGrid::new(theta_max, n_points)?;
    let report = ising::energy_nuclearity_report(mass, beta, basis, kappa, &grid)?;
    let (out, rungs) = audit::energy_audit(mass, basis, kappa, &grid)?;
    let ladder: Vec<Value> = [0.5, 1.0, 5.0, 20.0]
        .iter()
        .zip(&rungs)
        .map(|(bm, r)| json!({ "beta_mass": bm, "trace_phi": r.trace_phi, "trace_pi": r.trace_pi, "xi_bound": r.xi_bound }))
        .collect();
    let mut checks: Vec<Check> = out.checks;
    checks.push(Check::at_most(
        "report_grid_relative_change",
        report.grid_relative_change,
        ising::TRACE_REFINEMENT_TOL,
    ));
    Ok(Computed {
        converged: report.converged && rungs.iter().all(|r| r.converged),
        tables: spectral_tables(&report),
        results: json!({ "report": report, "beta_ladder": ladder }),
        checks,
    })
}
