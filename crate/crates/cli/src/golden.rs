//! Frozen regression values for the reference Ising scenarios and the
//! nested intersection fixture.

use std::path::Path;

use modnuc::audit::{self, Check};
use modnuc::ising::{self, TRACE_REFINEMENT_TOL};
use modnuc::{Error, Point, RapidityGrid, SpectralReport, Tolerances, WedgeScenario};
use serde::{Deserialize, Serialize};

/// Relative agreement required of a recomputed golden value.
pub const REPRODUCTION_TOL: f64 = 1e-8;
/// Largest grid tried by the refinement ladder.
pub const MAX_REFINED_POINTS: usize = 256_000;

pub const PROTOCOL: &str = "grid doubling from the reference node count until the trace estimates of \
                            two successive grids agree to the refinement tolerance; frozen values are \
                            those at the reference node count";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub mass: f64,
    /// Translation for the modular report; absent for the energy report.
    pub x: Option<(f64, f64)>,
    /// Inverse temperature for the energy report.
    pub beta: Option<f64>,
    pub basis: usize,
    pub kappa: f64,
    pub theta_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrozenValues {
    pub trace_phi: f64,
    pub trace_pi: f64,
    pub xi_bound: f64,
    pub det_bound: f64,
    pub exp_t_bound: f64,
    pub sigma_phi: Vec<f64>,
    pub sigma_pi: Vec<f64>,
    pub t_values: Vec<f64>,
}

impl From<&SpectralReport> for FrozenValues {
    fn from(r: &SpectralReport) -> Self {
        FrozenValues {
            trace_phi: r.trace_phi,
            trace_pi: r.trace_pi,
            xi_bound: r.xi_bound,
            det_bound: r.det_bound,
            exp_t_bound: r.exp_t_bound,
            sigma_phi: r.sigma_phi.clone(),
            sigma_pi: r.sigma_pi.clone(),
            t_values: r.t_values.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStep {
    pub n_points: usize,
    pub trace_phi: f64,
    pub trace_pi: f64,
    /// Against the previous step.
    pub relative_change: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralFixture {
    pub scenario: Scenario,
    pub values: FrozenValues,
    pub refinement: Vec<RefinementStep>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntersectionFixture {
    pub modes: usize,
    pub dimension: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fixture {
    pub protocol: String,
    pub refinement_tolerance: f64,
    pub reproduction_tolerance: f64,
    pub modular: SpectralFixture,
    pub energy: SpectralFixture,
    pub intersection: IntersectionFixture,
}

pub fn modular_scenario() -> Scenario {
    Scenario {
        mass: 1.0,
        x: Some((0.0, -1.0)),
        beta: None,
        basis: 8,
        kappa: 1.0,
        theta_max: 12.0,
        n_points: 2000,
    }
}

pub fn energy_scenario() -> Scenario {
    Scenario {
        x: None,
        beta: Some(1.0),
        ..modular_scenario()
    }
}

pub fn report(s: &Scenario, n_points: usize) -> modnuc::Result<SpectralReport> {
    let grid = RapidityGrid::new(s.theta_max, n_points)?;
    match (s.x, s.beta) {
        (Some((x0, x1)), None) => {
            ising::modular_nuclearity_report(&WedgeScenario::new(s.mass, Point::new(x0, x1), s.basis, s.kappa, grid)?)
        }
        (None, Some(beta)) => ising::energy_nuclearity_report(s.mass, beta, s.basis, s.kappa, &grid),
        _ => Err(Error::InvalidParameter("a scenario takes either a translation or a temperature".into())),
    }
}

fn relative(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Double the grid until successive trace estimates agree.
pub fn refine(s: &Scenario) -> modnuc::Result<Vec<RefinementStep>> {
    let mut steps: Vec<RefinementStep> = Vec::new();
    let mut n = s.n_points;
    loop {
        let r = report(s, n)?;
        let change = steps
            .last()
            .map(|p| relative(p.trace_phi, r.trace_phi).max(relative(p.trace_pi, r.trace_pi)));
        steps.push(RefinementStep {
            n_points: n,
            trace_phi: r.trace_phi,
            trace_pi: r.trace_pi,
            relative_change: change,
        });
        match change {
            Some(c) if c <= TRACE_REFINEMENT_TOL => return Ok(steps),
            _ if 2 * n > MAX_REFINED_POINTS => {
                return Err(Error::GridResolution {
                    relative_change: change.unwrap_or(f64::INFINITY),
                })
            }
            _ => n *= 2,
        }
    }
}

/// Frozen values at the reference node count plus the refinement ladder.
pub fn spectral(s: Scenario) -> modnuc::Result<SpectralFixture> {
    let values = FrozenValues::from(&report(&s, s.n_points)?);
    let refinement = refine(&s)?;
    Ok(SpectralFixture {
        scenario: s,
        values,
        refinement,
    })
}

pub fn compute() -> modnuc::Result<Fixture> {
    let (outer, inner) = audit::nested_fixture()?;
    let (_, dimension) = audit::intersection_audit(&outer, &inner, &Tolerances::default())?;
    Ok(Fixture {
        protocol: PROTOCOL.to_string(),
        refinement_tolerance: TRACE_REFINEMENT_TOL,
        reproduction_tolerance: REPRODUCTION_TOL,
        modular: spectral(modular_scenario())?,
        energy: spectral(energy_scenario())?,
        intersection: IntersectionFixture { modes: 3, dimension },
    })
}

fn max_relative(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| relative(*x, *y)).fold(0.0, f64::max)
}

pub fn compare_spectral(prefix: &str, stored: &SpectralFixture, fresh: &SpectralFixture, out: &mut Vec<Check>) {
    let (s, f) = (&stored.values, &fresh.values);
    let scalars = [
        ("trace_phi", s.trace_phi, f.trace_phi),
        ("trace_pi", s.trace_pi, f.trace_pi),
        ("xi_bound", s.xi_bound, f.xi_bound),
        ("det_bound", s.det_bound, f.det_bound),
        ("exp_t_bound", s.exp_t_bound, f.exp_t_bound),
    ];
    for (name, a, b) in scalars {
        out.push(Check::at_most(&format!("{prefix}.{name}"), relative(a, b), REPRODUCTION_TOL));
    }
    let ladders = [
        ("sigma_phi", &s.sigma_phi, &f.sigma_phi),
        ("sigma_pi", &s.sigma_pi, &f.sigma_pi),
        ("t_values", &s.t_values, &f.t_values),
    ];
    for (name, a, b) in ladders {
        out.push(Check::at_most(&format!("{prefix}.{name}"), max_relative(a, b), REPRODUCTION_TOL));
    }
    let last = fresh.refinement.last().and_then(|r| r.relative_change).unwrap_or(f64::INFINITY);
    out.push(Check::at_most(&format!("{prefix}.refinement_change"), last, TRACE_REFINEMENT_TOL));
    let same_scenario = stored.scenario == fresh.scenario;
    out.push(Check::at_most(&format!("{prefix}.scenario_mismatch"), if same_scenario { 0.0 } else { 1.0 }, 0.0));
}

/// One check per frozen quantity: the largest relative deviation against
/// [`REPRODUCTION_TOL`], and exact equality of the intersection dimension.
pub fn compare(stored: &Fixture, fresh: &Fixture) -> Vec<Check> {
    let mut out = Vec::new();
    compare_spectral("modular", &stored.modular, &fresh.modular, &mut out);
    compare_spectral("energy", &stored.energy, &fresh.energy, &mut out);
    let drift = fresh.intersection.dimension.abs_diff(stored.intersection.dimension);
    out.push(Check::at_most("intersection.dimension_difference", drift as f64, 0.0));
    out
}

pub fn load(path: &Path) -> Result<Fixture, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn to_json(fixture: &Fixture) -> String {
    let mut s = serde_json::to_string_pretty(fixture).expect("fixture serializes");
    s.push('\n');
    s
}
