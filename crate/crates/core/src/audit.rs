//! Seeded randomized audits of the structural identities and bounds.
//!
//! Every audit draws instance `i` from stream `i` of the master seed,
//! evaluates instances in parallel and reduces the worst values in index
//! order, so an outcome depends on the seed alone and not on the thread
//! count.

use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fields::{FieldContext, Sign};
use crate::fock::{FockOperator, FockSpace};
use crate::ising::{self, Point, RapidityGrid, SpectralReport, WedgeScenario};
use crate::linalg::{inner, max_abs, max_abs_diff, mul, op_norm, CMatrix, CVector, ONE, ZERO};
use crate::nuclearity;
use crate::one_particle::{fermi_bose_compare, OneParticleSpace, SubspacePair};
use crate::random;
use crate::tolerance::Tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    AtMost,
    AtLeast,
    Above,
}

/// One contract: the worst observed `value` against `limit`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub limit: f64,
    pub passed: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, relation: Relation, limit: f64) -> Self {
        let passed = match relation {
            Relation::AtMost => value <= limit,
            Relation::AtLeast => value >= limit,
            Relation::Above => value > limit,
        };
        Check {
            name: name.to_string(),
            value,
            relation,
            limit,
            passed,
        }
    }

    pub fn at_most(name: &str, value: f64, limit: f64) -> Self {
        Check::new(name, value, Relation::AtMost, limit)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditOutcome {
    pub suite: String,
    pub instances: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub metrics: BTreeMap<String, f64>,
}

impl AuditOutcome {
    fn new(suite: &str, instances: usize, seed: u64) -> Self {
        AuditOutcome {
            suite: suite.to_string(),
            instances,
            seed,
            checks: Vec::new(),
            metrics: BTreeMap::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn violations(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    fn metric(&mut self, name: &str, value: f64) {
        self.metrics.insert(name.to_string(), value);
    }
}

/// Run `f` on instances `0..n` in parallel and return results in order.
fn instances<T, F>(n: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

fn column_max<const K: usize>(rows: &[[f64; K]]) -> [f64; K] {
    let mut out = [f64::NEG_INFINITY; K];
    for row in rows {
        for (o, &v) in out.iter_mut().zip(row) {
            // NaN propagates so that a broken instance fails the check
            *o = if v.is_nan() || o.is_nan() { f64::NAN } else { o.max(v) };
        }
    }
    out
}

fn instance_rng(seed: u64, i: usize) -> random::InstanceRng {
    random::stream(seed, i as u64)
}

fn cycle_dim(i: usize, max_modes: usize) -> usize {
    1 + i % max_modes.max(1)
}

fn random_context<R: Rng + ?Sized>(rng: &mut R, d: usize) -> Result<FieldContext> {
    let space = random::space(rng, d);
    let pair = random::pair(rng, &space);
    FieldContext::new(&FockSpace::new(&space)?, &pair)
}

/// `{a(ψ₁), a*(ψ₂)} = ⟨ψ₁,ψ₂⟩`, `{a(ψ₁), a(ψ₂)} = {a*(ψ₁), a*(ψ₂)} = 0` and
/// `‖a*(ψ)‖ = ‖ψ‖`, on `trials` random pairs for each mode count in `dims`.
pub fn car_audit(dims: &[usize], trials: usize, seed: u64, tol: &Tolerances) -> Result<AuditOutcome> {
    let jobs: Vec<(usize, usize)> = dims.iter().flat_map(|&d| (0..trials).map(move |t| (d, t))).collect();
    let rows = instances(jobs.len(), |j| {
        let (d, t) = jobs[j];
        let mut rng = random::stream(seed, ((d as u64) << 32) | t as u64);
        let space = random::space(&mut rng, d);
        let fock = FockSpace::new(&space)?;
        let p1 = random::vector(&mut rng, d);
        let p2 = random::vector(&mut rng, d);
        let (c1, c2) = (fock.creator(&p1)?.into_matrix(), fock.creator(&p2)?.into_matrix());
        let (a1, a2) = (c1.adjoint(), c2.adjoint());
        let id = CMatrix::identity(fock.dim(), fock.dim());
        let mixed = max_abs(&(mul(&a1, &c2) + mul(&c2, &a1) - id * inner(&p1, &p2)));
        let pure = max_abs(&(mul(&a1, &a2) + mul(&a2, &a1))).max(max_abs(&(mul(&c1, &c2) + mul(&c2, &c1))));
        let norm = (op_norm(&c1) - p1.norm()).abs();
        Ok([mixed, pure, norm])
    })?;
    let worst = column_max(&rows);
    let mut out = AuditOutcome::new("car", jobs.len(), seed);
    out.push(Check::at_most("car_mixed_residual", worst[0], tol.conjugation));
    out.push(Check::at_most("car_pure_residual", worst[1], tol.conjugation));
    out.push(Check::at_most("creator_norm_defect", worst[2], tol.structural));
    out.metric("max_modes", dims.iter().cloned().max().unwrap_or(0) as f64);
    Ok(out)
}

fn norm_ratio(a: &FockOperator, reference: f64) -> f64 {
    if reference > 0.0 {
        a.op_norm() / reference
    } else {
        a.op_norm()
    }
}

/// The properties of `δ±`: graded Leibniz rule, norm bounds, vanishing on
/// primed and double-primed vectors, and the single-field closed form.
pub fn derivation_audit(count: usize, max_modes: usize, degree: usize, seed: u64, tol: &Tolerances) -> Result<AuditOutcome> {
    let degree = degree.max(1);
    let rows = instances(count, |i| {
        let mut rng = instance_rng(seed, i);
        let d = cycle_dim(i, max_modes);
        let ctx = random_context(&mut rng, d)?;
        let fock = ctx.fock();
        let base = fock.base();
        let psi = random::vector(&mut rng, d);
        let a = ctx.random_polynomial(1 + i % degree, rng.random());
        let b = ctx.random_polynomial(1 + (i / degree) % degree, rng.random());
        let graded = ctx.grade(&a);
        let mut leibniz: f64 = 0.0;
        let mut bound_excess = f64::NEG_INFINITY;
        for sign in [Sign::Plus, Sign::Minus] {
            let db = ctx.delta(sign, &psi, &b)?;
            for (part, s) in [(&graded.even_part, 1.0), (&graded.odd_part, -1.0)] {
                let product = fock.operator(part.matrix() * b.matrix())?;
                let lhs = ctx.delta(sign, &psi, &product)?;
                let rhs = ctx.delta(sign, &psi, part)?.matrix() * b.matrix() + part.matrix() * db.matrix() * crate::linalg::real_scalar(s);
                leibniz = leibniz.max(max_abs_diff(lhs.matrix(), &rhs));
                let (l, r) = ctx.delta_norm_bound(sign, &psi, part)?;
                bound_excess = bound_excess.max(l - r);
            }
        }
        let norm_a = a.op_norm();
        let primed = ctx.pair().primed_vector(&psi)?;
        let double_primed = ctx.pair().double_primed_vector(&psi)?;
        let vanishing = norm_ratio(&ctx.delta(Sign::Plus, &primed, &a)?, norm_a)
            .max(norm_ratio(&ctx.delta(Sign::Minus, &double_primed, &a)?, norm_a));
        let xi = random::vector(&mut rng, d);
        let field = ctx.field_phi(&xi)?;
        let g_psi = base.gamma(&psi)?;
        let mut closed: f64 = 0.0;
        for sign in [Sign::Plus, Sign::Minus] {
            let want = inner(&g_psi, &xi) - inner(&xi, &g_psi) * sign.value();
            let got = ctx.delta(sign, &psi, &field)?;
            let id = CMatrix::identity(fock.dim(), fock.dim()) * want;
            closed = closed.max(max_abs_diff(got.matrix(), &id));
        }
        Ok([leibniz, bound_excess, vanishing, closed])
    })?;
    let worst = column_max(&rows);
    let mut out = AuditOutcome::new("derivations", count, seed);
    out.push(Check::at_most("graded_leibniz_residual", worst[0], tol.structural));
    out.push(Check::at_most("norm_bound_excess", worst[1], tol.derived));
    out.push(Check::at_most("primed_vanishing", worst[2], tol.derived));
    out.push(Check::at_most("single_field_closed_form", worst[3], tol.conjugation));
    Ok(out)
}

struct ExpansionInstance {
    ctx: FieldContext,
    x: crate::one_particle::PositiveOperator,
    xis: Vec<CVector>,
    a: FockOperator,
}

/// Instance `i` cycles through `d = 1..=max_modes`, `n = 0..=max_order`
/// (capped at `d`) and both parities.
fn expansion_instance(seed: u64, i: usize, max_modes: usize, max_order: usize, degree: usize) -> Result<ExpansionInstance> {
    let mut rng = instance_rng(seed, i);
    let d = cycle_dim(i, max_modes);
    let n = ((i / max_modes.max(1)) % (max_order + 1)).min(d);
    let odd = (i / (max_modes.max(1) * (max_order + 1))) % 2 == 1;
    let ctx = random_context(&mut rng, d)?;
    let x = random::positive_gamma_operator(&mut rng, ctx.fock().base());
    let xis = (0..n).map(|_| random::vector(&mut rng, d)).collect();
    let poly = ctx.random_polynomial(1 + i % degree.max(1), rng.random());
    let graded = ctx.grade(&poly);
    let a = if odd { graded.odd_part } else { graded.even_part };
    Ok(ExpansionInstance { ctx, x, xis, a })
}

/// The commutator expansion of `⟨a*(Γξ₁)···a*(Γξₙ)Ω, XA±Ω⟩`.
pub fn identity_audit(
    count: usize,
    max_modes: usize,
    max_order: usize,
    degree: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<AuditOutcome> {
    let rows = instances(count, |i| {
        let inst = expansion_instance(seed, i, max_modes, max_order, degree)?;
        let (lhs, rhs) = nuclearity::expansion_identity_check(&inst.ctx, &inst.x, &inst.xis, &inst.a)?;
        Ok([(lhs - rhs).norm() / (1.0 + lhs.norm())])
    })?;
    let mut out = AuditOutcome::new("identity", count, seed);
    out.push(Check::at_most("expansion_relative_residual", column_max(&rows)[0], tol.derived));
    Ok(out)
}

/// `|⟨a*(Γξ₁)···a*(Γξₙ)Ω, XA±Ω⟩| ≤ 2ⁿ‖A±‖Π‖Tξⱼ‖` on the instances of
/// [`identity_audit`].
pub fn estimate_audit(
    count: usize,
    max_modes: usize,
    max_order: usize,
    degree: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<AuditOutcome> {
    let rows = instances(count, |i| {
        let inst = expansion_instance(seed, i, max_modes, max_order, degree)?;
        let (lhs, rhs) = nuclearity::estimate_check(&inst.ctx, &inst.x, &inst.xis, &inst.a)?;
        let ratio = if rhs > 0.0 { lhs / rhs } else { 0.0 };
        Ok([lhs - rhs, ratio])
    })?;
    let worst = column_max(&rows);
    let mut out = AuditOutcome::new("estimate", count, seed);
    out.push(Check::at_most("estimate_excess", worst[0], tol.derived));
    out.metric("max_ratio", worst[1]);
    Ok(out)
}

/// The chain `subset sum = det(1+2T) ≤ exp(2‖T‖₁) ≤ exp(2(‖T_φ‖₁+‖T_π‖₁))`
/// on random contractions, and `empirical ≤ det` with per-vector bounds on
/// random separating pairs.
pub fn bound_audit(
    count: usize,
    max_modes: usize,
    samples: usize,
    seed: u64,
    tol: &Tolerances,
) -> Result<AuditOutcome> {
    let rows = instances(count, |i| {
        let mut rng = instance_rng(seed, i);
        let d = cycle_dim(i, max_modes);
        let t_phi = random::contraction(&mut rng, d, 1.0);
        let t_pi = random::contraction(&mut rng, d, 1.0);
        let r = nuclearity::nuclear_bound(&t_phi, &t_pi)?;
        let subset = r.subset_sum.map_or(0.0, |s| (s - r.det_bound).abs() / r.det_bound);
        let det_le_exp_t = r.det_bound / r.exp_t_bound - 1.0;
        let exp_t_le_exp = r.exp_t_bound / r.exp_bound - 1.0;

        let space = random::space(&mut rng, d);
        let pair = random::separating_pair(&mut rng, &space);
        let ctx = FieldContext::new(&FockSpace::new(&space)?, &pair)?;
        let x = random::positive_gamma_operator(&mut rng, &space);
        let e = nuclearity::empirical_nuclear_sum(&ctx, &x, samples, rng.random())?;
        let empirical = e.empirical_sum.unwrap_or(0.0) / e.det_bound - 1.0;
        let per_vector = e.per_vector.iter().map(|v| v.estimate - v.bound).fold(f64::NEG_INFINITY, f64::max);
        let chain = (e.det_bound / e.exp_t_bound - 1.0).max(e.exp_t_bound / e.exp_bound - 1.0);
        Ok([subset, det_le_exp_t.max(chain), exp_t_le_exp, empirical, per_vector])
    })?;
    let worst = column_max(&rows);
    let mut out = AuditOutcome::new("bound", count, seed);
    out.push(Check::at_most("subset_sum_relative_defect", worst[0], tol.conjugation));
    out.push(Check::at_most("det_over_exp_trace_excess", worst[1], tol.conjugation));
    out.push(Check::at_most("exp_trace_over_exp_bound_excess", worst[2], tol.conjugation));
    out.push(Check::at_most("empirical_over_det_excess", worst[3], tol.derived));
    out.push(Check::at_most("per_vector_excess", worst[4], tol.derived));
    out.metric("samples", samples as f64);
    Ok(out)
}

/// `exp(2‖T‖₁) < Π(1−t_k)^{−2}` for random nonzero `T` with `‖T‖ ≤ max_norm`.
pub fn fermi_bose_audit(count: usize, max_modes: usize, max_norm: f64, seed: u64) -> Result<AuditOutcome> {
    if !(max_norm > 0.0 && max_norm < 1.0) {
        return Err(Error::InvalidParameter(format!("max_norm must lie in (0, 1), got {max_norm}")));
    }
    let rows = instances(count, |i| {
        let mut rng = instance_rng(seed, i);
        let t = random::contraction(&mut rng, cycle_dim(i, max_modes), max_norm);
        let (fermi, bose) = fermi_bose_compare(&t)?;
        Ok([bose - fermi, (bose - fermi) / fermi])
    })?;
    let min_gap = rows.iter().map(|r| r[0]).fold(f64::INFINITY, f64::min);
    let min_relative = rows.iter().map(|r| r[1]).fold(f64::INFINITY, f64::min);
    let mut out = AuditOutcome::new("fermi_bose", count, seed);
    out.push(Check::new("min_bose_minus_fermi", min_gap, Relation::Above, 0.0));
    out.metric("min_relative_gap", min_relative);
    Ok(out)
}

/// `Λ(X)·slater(ψ) = slater(Xψ)` and agreement of the minor formula with
/// the matrix assembled from images of basis Slater vectors.
pub fn second_quantization_audit(count: usize, max_modes: usize, seed: u64, tol: &Tolerances) -> Result<AuditOutcome> {
    let rows = instances(count, |i| {
        let mut rng = instance_rng(seed, i);
        let d = cycle_dim(i, max_modes);
        let space = random::space(&mut rng, d);
        let fock = FockSpace::new(&space)?;
        let x = random::matrix(&mut rng, d, d);
        let lx = fock.second_quantize(&x)?;
        let n = rng.random_range(0..=d);
        let psis: Vec<CVector> = (0..n).map(|_| random::vector(&mut rng, d)).collect();
        let images: Vec<CVector> = psis.iter().map(|p| &x * p).collect();
        let direct = (lx.matrix() * fock.slater(&psis)? - fock.slater(&images)?).camax();

        let unit = |k: usize| CVector::from_fn(d, |r, _| if r == k { ONE } else { ZERO });
        let mut basis = Vec::with_capacity(fock.dim());
        let mut mapped = Vec::with_capacity(fock.dim());
        for mask in 0..fock.dim() {
            let modes: Vec<CVector> = (0..d).filter(|k| mask & (1 << k) != 0).map(unit).collect();
            let images: Vec<CVector> = modes.iter().map(|e| &x * e).collect();
            basis.push(fock.slater(&modes)?);
            mapped.push(fock.slater(&images)?);
        }
        let assembled = CMatrix::from_columns(&mapped) * CMatrix::from_columns(&basis).adjoint();
        Ok([direct, max_abs_diff(&assembled, lx.matrix())])
    })?;
    let worst = column_max(&rows);
    let mut out = AuditOutcome::new("second_quantization", count, seed);
    out.push(Check::at_most("slater_image_residual", worst[0], tol.structural));
    out.push(Check::at_most("minor_vs_image_path", worst[1], tol.structural));
    Ok(out)
}

/// `L₁ = ℝ³` (all `Γ`-fixed vectors for `C = 1`) and `L₂ = ℝe₁ ⊂ L₁`.
pub fn nested_fixture() -> Result<(FieldContext, FieldContext)> {
    let space = OneParticleSpace::standard(3)?;
    let fock = FockSpace::new(&space)?;
    let unit = |k: usize| CVector::from_fn(3, |r, _| if r == k { ONE } else { ZERO });
    let outer = SubspacePair::new(&space, &[unit(0), unit(1), unit(2)], &[])?;
    let inner = SubspacePair::new(&space, &[unit(0)], &[])?;
    Ok((FieldContext::new(&fock, &outer)?, FieldContext::new(&fock, &inner)?))
}

pub fn intersection_audit(ctx1: &FieldContext, ctx2: &FieldContext, tol: &Tolerances) -> Result<(AuditOutcome, usize)> {
    let r = nuclearity::double_cone_intersection(ctx1, ctx2)?;
    let mut out = AuditOutcome::new("intersection", 1, 0);
    out.push(Check::new("dimension", r.dim() as f64, Relation::AtLeast, 1.0));
    out.push(Check::at_most("closure_defect", r.closure_defect, tol.derived));
    out.push(Check::at_most("commutation_defect", r.commutation_defect, tol.derived));
    out.push(Check::at_most("containment_defect", r.containment_defect, tol.derived));
    out.metric("dimension", r.dim() as f64);
    Ok((out, r.dim()))
}

fn report_invariants(out: &mut AuditOutcome, prefix: &str, reports: &[&SpectralReport]) {
    let mut min_sigma = f64::INFINITY;
    let mut min_xi = f64::INFINITY;
    let mut chain = f64::NEG_INFINITY;
    for r in reports {
        for &s in r.sigma_phi.iter().chain(&r.sigma_pi) {
            min_sigma = min_sigma.min(s);
        }
        min_xi = min_xi.min(r.xi_bound);
        chain = chain.max(r.det_bound / r.exp_t_bound - 1.0).max(r.exp_t_bound / r.xi_bound - 1.0);
    }
    out.push(Check::new(&format!("{prefix}min_sigma"), min_sigma, Relation::AtLeast, -1e-12));
    out.push(Check::new(&format!("{prefix}min_xi_bound"), min_xi, Relation::AtLeast, 1.0));
    out.push(Check::at_most(&format!("{prefix}bound_chain_excess"), chain, 1e-12));
}

/// Largest relative step against the expected direction of a ladder.
fn ladder_violation(values: &[f64], increasing: bool) -> f64 {
    values
        .windows(2)
        .map(|w| {
            let step = if increasing { w[0] - w[1] } else { w[1] - w[0] };
            step / w[0].abs().max(f64::MIN_POSITIVE)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn total(r: &SpectralReport) -> f64 {
    r.trace_phi + r.trace_pi
}

/// Convergence, ladders in `J` and in the separation, time-reflection
/// symmetry, rejection of the opposite wedge and growth at the wedge edge,
/// around the scenario `(mass, x, basis_size, kappa, grid)`.
pub fn ising_audit(scenario: &WedgeScenario) -> Result<(AuditOutcome, SpectralReport)> {
    let m = scenario.mass;
    let with = |x: Point, j: usize| {
        WedgeScenario::new(m, x, j, scenario.kappa, scenario.grid.clone()).and_then(|s| ising::modular_nuclearity_report(&s))
    };
    let reference = ising::modular_nuclearity_report(scenario)?;
    let mut out = AuditOutcome::new("ising", 1, 0);
    out.push(Check::at_most("grid_relative_change", reference.grid_relative_change, ising::TRACE_REFINEMENT_TOL));

    let j_ladder: Vec<SpectralReport> = [2, 4, 6, 8]
        .iter()
        .map(|&j| with(scenario.x, j))
        .collect::<Result<_>>()?;
    let phi: Vec<f64> = j_ladder.iter().map(|r| r.trace_phi).collect();
    let pi: Vec<f64> = j_ladder.iter().map(|r| r.trace_pi).collect();
    out.push(Check::at_most(
        "basis_ladder_decrease",
        ladder_violation(&phi, true).max(ladder_violation(&pi, true)),
        1e-9,
    ));

    let s_ladder: Vec<SpectralReport> = [0.5, 1.0, 2.0, 4.0]
        .iter()
        .map(|&s| with(Point::new(0.0, -s / m), scenario.basis_size))
        .collect::<Result<_>>()?;
    let phi: Vec<f64> = s_ladder.iter().map(|r| r.trace_phi).collect();
    let pi: Vec<f64> = s_ladder.iter().map(|r| r.trace_pi).collect();
    out.push(Check::at_most(
        "separation_ladder_increase",
        ladder_violation(&phi, false).max(ladder_violation(&pi, false)),
        1e-12,
    ));

    let tilted = Point::new(0.3 / m, -1.0 / m);
    let a = with(tilted, scenario.basis_size)?;
    let b = with(Point::new(-tilted.x0, tilted.x1), scenario.basis_size)?;
    let reflection = a
        .sigma_phi
        .iter()
        .zip(&b.sigma_phi)
        .chain(a.sigma_pi.iter().zip(&b.sigma_pi))
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    out.push(Check::at_most("time_reflection_sigma_difference", reflection, 1e-8));

    let right = Point::new(0.0, 1.0 / m);
    let rejected = matches!(with(right, scenario.basis_size), Err(Error::WedgeCondition { .. }))
        && ising::check_damping(m, right).is_err();
    out.push(Check::at_most("right_wedge_accepted", if rejected { 0.0 } else { 1.0 }, 0.0));

    let near = with(Point::new(0.0, -0.05 / m), scenario.basis_size)?;
    let far = &s_ladder[0];
    out.push(Check::new("edge_growth_factor", total(&near) / total(far), Relation::AtLeast, 2.0));

    let mut all: Vec<&SpectralReport> = vec![&reference, &a, &b, &near];
    all.extend(j_ladder.iter());
    all.extend(s_ladder.iter());
    report_invariants(&mut out, "", &all);
    out.metric("trace_phi", reference.trace_phi);
    out.metric("trace_pi", reference.trace_pi);
    out.metric("xi_bound", reference.xi_bound);
    Ok((out, reference))
}

/// The ladder `βm ∈ {0.5, 1, 5, 20}` at fixed basis: traces nonincreasing
/// in `β` and the bound at `βm = 20` within `1e−6` of one.
pub fn energy_audit(mass: f64, basis_size: usize, kappa: f64, grid: &RapidityGrid) -> Result<(AuditOutcome, Vec<SpectralReport>)> {
    let reports: Vec<SpectralReport> = [0.5, 1.0, 5.0, 20.0]
        .iter()
        .map(|&bm| ising::energy_nuclearity_report(mass, bm / mass, basis_size, kappa, grid))
        .collect::<Result<_>>()?;
    let mut out = AuditOutcome::new("energy", reports.len(), 0);
    let phi: Vec<f64> = reports.iter().map(|r| r.trace_phi).collect();
    let pi: Vec<f64> = reports.iter().map(|r| r.trace_pi).collect();
    out.push(Check::at_most(
        "beta_ladder_increase",
        ladder_violation(&phi, false).max(ladder_violation(&pi, false)),
        1e-12,
    ));
    let last = reports.last().expect("four rungs");
    out.push(Check::at_most("large_beta_bound_minus_one", last.xi_bound - 1.0, 1e-6));
    out.push(Check::at_most(
        "grid_relative_change",
        reports.iter().map(|r| r.grid_relative_change).fold(0.0, f64::max),
        ising::TRACE_REFINEMENT_TOL,
    ));
    let refs: Vec<&SpectralReport> = reports.iter().collect();
    report_invariants(&mut out, "", &refs);
    Ok((out, reports))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn check_relations() {
        assert!(Check::at_most("a", 1.0, 1.0).passed);
        assert!(!Check::at_most("a", f64::NAN, 1.0).passed);
        assert!(!Check::new("b", 0.0, Relation::Above, 0.0).passed);
        assert!(Check::new("c", 2.0, Relation::AtLeast, 2.0).passed);
    }

    #[test]
    fn small_audits_pass_and_are_reproducible() {
        let tol = Tolerances::default();
        let a = car_audit(&[2, 3], 5, 1, &tol).unwrap();
        assert!(a.passed(), "{:?}", a.violations());
        assert_eq!(a, car_audit(&[2, 3], 5, 1, &tol).unwrap());
        for out in [
            derivation_audit(12, 3, 3, 2, &tol).unwrap(),
            identity_audit(12, 3, 2, 3, 3, &tol).unwrap(),
            estimate_audit(12, 3, 2, 3, 3, &tol).unwrap(),
            bound_audit(6, 3, 10, 4, &tol).unwrap(),
            fermi_bose_audit(10, 4, 0.95, 5).unwrap(),
            second_quantization_audit(8, 3, 6, &tol).unwrap(),
        ] {
            assert!(out.passed(), "{}: {:?}", out.suite, out.violations());
        }
    }

    #[test]
    fn nested_fixture_intersection() {
        let (a, b) = nested_fixture().unwrap();
        let (out, dim) = intersection_audit(&a, &b, &Tolerances::default()).unwrap();
        assert!(out.passed());
        assert_eq!(dim, 4);
    }

    #[test]
    fn ladder_violation_directions() {
        assert!(ladder_violation(&[1.0, 2.0, 3.0], true) < 0.0);
        assert!(ladder_violation(&[3.0, 2.0, 2.5], false) > 0.0);
    }
}
