//! The map `Ξ(A) = Λ(X)AΩ` on the field algebra, the commutator expansion
//! of its matrix elements, and the chain of bounds on its nuclear norm.
//!
//! With `T = (|E_φX|² + |E_πX|²)^{1/2}` and eigenvalues `t_k`, the matrix
//! elements against the Slater basis of `T`'s eigenvectors satisfy
//! `|⟨b_K, XA±Ω⟩| ≤ 2^{|K|}‖A±‖ Π_{k∈K} t_k`, and summing over all `K`
//! gives `Π(1+2t_k) = det(1+2T) ≤ exp(2‖T‖₁) ≤ exp(2(‖T_φ‖₁+‖T_π‖₁))`.

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{self, OperatorBasis};
use crate::error::{Error, Result};
use crate::fields::{FieldContext, Sign};
use crate::fock::{FockOperator, Parity};
use crate::linalg::{inner, CMatrix, CVector};
use crate::one_particle::{combine_t, hermitian_spectrum, trace_norm, PositiveOperator};
use crate::random;

/// Largest dimension for which the explicit subset sum is enumerated.
pub const SUBSET_SUM_MAX_DIM: usize = 12;

/// Lower estimate of `sup_{‖A‖≤1} |⟨b_K, Λ(X)AΩ⟩|` for one Slater vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlaterEstimate {
    /// Eigenvector indices `k₁ < … < kₙ` of `T`.
    pub modes: Vec<usize>,
    pub estimate: f64,
    /// `2ⁿ Π t_{k_j}`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NuclearityReport {
    /// Eigenvalues of `T`, descending.
    pub t_values: Vec<f64>,
    pub trace_t_phi: f64,
    pub trace_t_pi: f64,
    /// `det(1+2T)`.
    pub det_bound: f64,
    /// `exp(2‖T‖₁)`.
    pub exp_t_bound: f64,
    /// `exp(2(‖T_φ‖₁+‖T_π‖₁))`.
    pub exp_bound: f64,
    /// `Σ_K Π_{k∈K} 2t_k`, present when the dimension allows enumeration.
    pub subset_sum: Option<f64>,
    pub empirical_sum: Option<f64>,
    pub per_vector: Vec<SlaterEstimate>,
    pub sample_count: usize,
    pub seed: Option<u64>,
}

/// `Λ(X)AΩ`.
pub fn xi_apply(ctx: &FieldContext, x: &PositiveOperator, a: &FockOperator) -> Result<CVector> {
    x.check_gamma(ctx.fock().base())?;
    let lx = ctx.fock().second_quantize(x.matrix())?;
    Ok(lx.matrix() * (a.matrix() * ctx.fock().vacuum()))
}

/// Basis of the unital algebra generated by the fields over `L`.
pub fn field_algebra(ctx: &FieldContext) -> OperatorBasis {
    let gens: Vec<CMatrix> = ctx.generators().into_iter().map(FockOperator::into_matrix).collect();
    algebra::generated_algebra(ctx.fock().dim(), &gens)
}

/// Whether `AΩ = 0` forces `A = 0` on the field algebra.
pub fn separation_check(ctx: &FieldContext) -> bool {
    let alg = field_algebra(ctx);
    let n = ctx.fock().dim();
    let k = alg.dim();
    if k > n {
        return false;
    }
    let images = CMatrix::from_fn(n, k, |r, c| alg.element(c)[(r, 0)]);
    let sv = images.singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    let min = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    max > 0.0 && min > algebra::RANK_TOL * max
}

fn check_definite(a: &FockOperator) -> Result<()> {
    if a.parity() == Parity::Mixed {
        Err(Error::MixedParity)
    } else {
        Ok(())
    }
}

fn check_vectors(ctx: &FieldContext, xis: &[CVector]) -> Result<()> {
    let d = ctx.fock().modes();
    if xis.len() > d {
        return Err(Error::InvalidParameter(format!(
            "{} one-particle vectors exceed {d} modes",
            xis.len()
        )));
    }
    xis.iter().try_for_each(|xi| ctx.fock().base().check_len(xi))
}

fn slater_of_gamma(ctx: &FieldContext, xis: &[CVector]) -> Result<CVector> {
    let base = ctx.fock().base();
    let gammas: Vec<CVector> = xis.iter().map(|xi| base.apply_gamma(xi)).collect();
    ctx.fock().slater(&gammas)
}

/// Both sides of
/// `⟨a*(Γξ₁)···a*(Γξₙ)Ω, XA±Ω⟩ = 2⁻ⁿ⟨Ω, D_{ξₙ}···D_{ξ₁}(A±)Ω⟩`
/// with `D_ξ = δ⁺_{Xξ} + δ⁻_{Xξ}`.
pub fn expansion_identity_check(
    ctx: &FieldContext,
    x: &PositiveOperator,
    xis: &[CVector],
    a: &FockOperator,
) -> Result<(Complex64, Complex64)> {
    check_definite(a)?;
    check_vectors(ctx, xis)?;
    x.check_gamma(ctx.fock().base())?;
    let lhs = inner(&slater_of_gamma(ctx, xis)?, &xi_apply(ctx, x, a)?);
    let mut current = a.clone();
    for xi in xis {
        let x_xi = x.matrix() * xi;
        let plus = ctx.delta(Sign::Plus, &x_xi, &current)?;
        let minus = ctx.delta(Sign::Minus, &x_xi, &current)?;
        current = ctx.fock().tagged(plus.matrix() + minus.matrix(), plus.parity());
    }
    let rhs = current.matrix()[(0, 0)] * 0.5f64.powi(xis.len() as i32);
    Ok((lhs, rhs))
}

/// `(|⟨a*(Γξ₁)···a*(Γξₙ)Ω, XA±Ω⟩|, 2ⁿ‖A±‖Π‖Tξⱼ‖)`.
pub fn estimate_check(
    ctx: &FieldContext,
    x: &PositiveOperator,
    xis: &[CVector],
    a: &FockOperator,
) -> Result<(f64, f64)> {
    check_definite(a)?;
    check_vectors(ctx, xis)?;
    let lhs = inner(&slater_of_gamma(ctx, xis)?, &xi_apply(ctx, x, a)?).norm();
    let t = t_operator(ctx, x)?;
    let product: f64 = xis.iter().map(|xi| (&t * xi).norm()).product();
    Ok((lhs, 2f64.powi(xis.len() as i32) * a.op_norm() * product))
}

/// `T = (|E_φX|² + |E_πX|²)^{1/2}`.
pub fn t_operator(ctx: &FieldContext, x: &PositiveOperator) -> Result<CMatrix> {
    ctx.fock().base().check_square(x.matrix())?;
    let pair = ctx.pair();
    combine_t(&(pair.proj_phi() * x.matrix()), &(pair.proj_pi() * x.matrix()))
}

/// The bound chain for given `T_φ`, `T_π`.
pub fn nuclear_bound(t_phi: &CMatrix, t_pi: &CMatrix) -> Result<NuclearityReport> {
    let t = combine_t(t_phi, t_pi)?;
    let t_values: Vec<f64> = hermitian_spectrum(&t).into_iter().map(|v| v.max(0.0)).collect();
    let trace_t_phi = trace_norm(t_phi);
    let trace_t_pi = trace_norm(t_pi);
    let det_bound = t_values.iter().map(|t| 1.0 + 2.0 * t).product();
    let exp_t_bound = (2.0 * t_values.iter().sum::<f64>()).exp();
    let exp_bound = (2.0 * (trace_t_phi + trace_t_pi)).exp();
    let subset_sum = (t_values.len() <= SUBSET_SUM_MAX_DIM).then(|| subset_sum(&t_values));
    Ok(NuclearityReport {
        t_values,
        trace_t_phi,
        trace_t_pi,
        det_bound,
        exp_t_bound,
        exp_bound,
        subset_sum,
        empirical_sum: None,
        per_vector: Vec::new(),
        sample_count: 0,
        seed: None,
    })
}

/// `Σ_{K ⊆ {1..d}} Π_{k∈K} 2t_k` by explicit enumeration.
pub fn subset_sum(t: &[f64]) -> f64 {
    (0..1usize << t.len())
        .map(|mask| {
            t.iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, &tk)| 2.0 * tk)
                .product::<f64>()
        })
        .sum()
}

/// Lower estimate of `Σ_K ‖ρ_K‖` over the Slater basis built from
/// `Γ`-fixed eigenvectors of `T`, by sampling the unit ball of the field
/// algebra. Sample 0 is the identity; sample `i > 0` is a random
/// polynomial of degree `1 + (i−1) mod 2d` seeded from stream `i` of `seed`.
pub fn empirical_nuclear_sum(
    ctx: &FieldContext,
    x: &PositiveOperator,
    samples: usize,
    seed: u64,
) -> Result<NuclearityReport> {
    x.check_gamma(ctx.fock().base())?;
    if !separation_check(ctx) {
        return Err(Error::NotSeparating);
    }
    let pair = ctx.pair();
    let t_phi = pair.proj_phi() * x.matrix();
    let t_pi = pair.proj_pi() * x.matrix();
    let mut report = nuclear_bound(&t_phi, &t_pi)?;
    let t = combine_t(&t_phi, &t_pi)?;
    let base = ctx.fock().base();
    let (t_values, eigvecs) = base.gamma_real_eigenbasis(&t)?;
    let t_values: Vec<f64> = t_values.into_iter().map(|v| v.max(0.0)).collect();
    let d = ctx.fock().modes();
    let columns: Vec<CVector> = eigvecs.column_iter().map(|c| c.into_owned()).collect();

    let masks: Vec<usize> = (0..1usize << d).collect();
    let slaters: Vec<CVector> = masks
        .iter()
        .map(|&mask| {
            let chosen: Vec<CVector> = (0..d).filter(|k| mask & (1 << k) != 0).map(|k| columns[k].clone()).collect();
            ctx.fock().slater(&chosen)
        })
        .collect::<Result<_>>()?;
    let lx = ctx.fock().second_quantize(x.matrix())?;
    let vacuum = ctx.fock().vacuum();

    let max_degree = (2 * d).max(1);
    let per_sample: Vec<Vec<f64>> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let a = if i == 0 {
                ctx.fock().identity()
            } else {
                let degree = 1 + (i - 1) % max_degree;
                let poly_seed: u64 = random::stream(seed, i as u64).random();
                ctx.random_polynomial(degree, poly_seed)
            };
            let image = lx.matrix() * (a.matrix() * &vacuum);
            slaters.iter().map(|b| inner(b, &image).norm()).collect()
        })
        .collect();

    let mut per_vector: Vec<SlaterEstimate> = masks
        .iter()
        .map(|&mask| {
            let modes: Vec<usize> = (0..d).filter(|k| mask & (1 << k) != 0).collect();
            let bound = modes.iter().map(|&k| 2.0 * t_values[k]).product();
            SlaterEstimate {
                modes,
                estimate: 0.0,
                bound,
            }
        })
        .collect();
    for row in &per_sample {
        for (entry, &v) in per_vector.iter_mut().zip(row) {
            entry.estimate = entry.estimate.max(v);
        }
    }
    report.empirical_sum = Some(per_vector.iter().map(|e| e.estimate).sum());
    report.per_vector = per_vector;
    report.sample_count = samples;
    report.seed = Some(seed);
    Ok(report)
}

/// Intersection `A(L₁) ∩ A(L₂)′` of the field algebra of `ctx1` with the
/// commutant of the fields of `ctx2`.
#[derive(Debug, Clone)]
pub struct Intersection {
    pub basis: OperatorBasis,
    /// Products and adjoints of basis elements leaving the span.
    pub closure_defect: f64,
    /// Commutators with the generators of the second algebra.
    pub commutation_defect: f64,
    /// Distance of basis elements from the first algebra.
    pub containment_defect: f64,
}

impl Intersection {
    pub fn dim(&self) -> usize {
        self.basis.dim()
    }
}

pub fn double_cone_intersection(ctx1: &FieldContext, ctx2: &FieldContext) -> Result<Intersection> {
    if ctx1.fock() != ctx2.fock() {
        return Err(Error::ForeignPair);
    }
    let n = ctx1.fock().dim();
    let first = field_algebra(ctx1);
    let mut gens2: Vec<CMatrix> = ctx2.generators().into_iter().map(FockOperator::into_matrix).collect();
    gens2.push(CMatrix::identity(n, n));
    let second = algebra::commutant(n, &gens2);
    let basis = first.intersect(&second);
    let closure_defect = basis.closure_defect();
    let commutation_defect = basis.commutation_defect(&gens2);
    let containment_defect = basis
        .elements()
        .iter()
        .map(|b| first.span_defect(b))
        .fold(0.0, f64::max);
    Ok(Intersection {
        basis,
        closure_defect,
        commutation_defect,
        containment_defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockSpace;
    use crate::linalg::{real_scalar, ONE, ZERO};
    use crate::one_particle::{OneParticleSpace, SubspacePair};
    use approx::assert_relative_eq;

    fn unit(d: usize, k: usize) -> CVector {
        CVector::from_fn(d, |i, _| if i == k { ONE } else { ZERO })
    }

    fn context(d: usize, phi: &[usize], pi: &[usize]) -> FieldContext {
        let space = OneParticleSpace::standard(d).unwrap();
        let phi: Vec<CVector> = phi.iter().map(|&k| unit(d, k)).collect();
        let pi: Vec<CVector> = pi.iter().map(|&k| unit(d, k)).collect();
        let pair = SubspacePair::new(&space, &phi, &pi).unwrap();
        FieldContext::new(&FockSpace::new(&space).unwrap(), &pair).unwrap()
    }

    fn diag(values: &[f64]) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(values.len(), values.iter().map(|&v| real_scalar(v))))
    }

    #[test]
    fn xi_apply_examples() {
        let ctx = context(3, &[0, 1, 2], &[]);
        let x = PositiveOperator::new(diag(&[0.3, 0.5, 0.9])).unwrap();
        let vac = ctx.fock().vacuum();
        assert!((xi_apply(&ctx, &x, &ctx.fock().identity()).unwrap() - &vac).norm() < 1e-14);
        let psi = CVector::from_vec(vec![real_scalar(0.4), real_scalar(-1.0), real_scalar(0.2)]);
        let out = xi_apply(&ctx, &x, &ctx.field_phi(&psi).unwrap()).unwrap();
        let want = ctx.fock().slater(&[x.matrix() * &psi]).unwrap();
        assert!((out - want).norm() < 1e-13);
        let a = ctx.random_polynomial(3, 9);
        let direct = a.matrix() * &vac;
        assert!((xi_apply(&ctx, &PositiveOperator::identity(3), &a).unwrap() - direct).norm() < 1e-12);
    }

    #[test]
    fn xi_apply_requires_gamma_commutation() {
        let ctx = context(2, &[0], &[]);
        let mut m = diag(&[1.0, 1.0]);
        m[(0, 1)] = crate::linalg::I * 0.5;
        m[(1, 0)] = -crate::linalg::I * 0.5;
        let x = PositiveOperator::new(m).unwrap();
        assert!(matches!(
            xi_apply(&ctx, &x, &ctx.fock().identity()),
            Err(Error::GammaCommutation { .. })
        ));
    }

    #[test]
    fn separation_cases() {
        assert!(separation_check(&context(3, &[], &[])));
        // (1+Γ)K: a Clifford algebra of dimension 2^d acting on 2^d
        assert!(separation_check(&context(3, &[0, 1, 2], &[])));
        // L = K as a real space generates everything
        assert!(!separation_check(&context(2, &[0, 1], &[0, 1])));
    }

    #[test]
    fn expansion_small_orders() {
        let ctx = context(3, &[0, 2], &[1]);
        let x = PositiveOperator::new(diag(&[0.6, 0.2, 0.8])).unwrap();
        let a = ctx.grade(&ctx.random_polynomial(2, 4)).even_part;
        let (lhs, rhs) = expansion_identity_check(&ctx, &x, &[], &a).unwrap();
        assert!((lhs - rhs).norm() < 1e-12);
        assert!((lhs - a.matrix()[(0, 0)]).norm() < 1e-12);

        let xi = CVector::from_vec(vec![real_scalar(0.3), crate::linalg::I * 0.7, real_scalar(-0.5)]);
        let xi_p = CVector::from_vec(vec![real_scalar(1.0), ZERO, real_scalar(0.25)]);
        let field = ctx.field_phi(&xi_p).unwrap();
        let (lhs, rhs) = expansion_identity_check(&ctx, &x, std::slice::from_ref(&xi), &field).unwrap();
        let closed = inner(&ctx.fock().base().gamma(&(x.matrix() * &xi)).unwrap(), &xi_p);
        assert!((lhs - closed).norm() < 1e-12);
        assert!((rhs - closed).norm() < 1e-12);
        let mixed = ctx.fock().operator(ctx.fock().identity().matrix() + field.matrix()).unwrap();
        assert!(matches!(
            expansion_identity_check(&ctx, &x, &[xi], &mixed),
            Err(Error::MixedParity)
        ));
    }

    #[test]
    fn estimate_zero_factor() {
        // T e₂ = 0 when e₂ ∉ L
        let ctx = context(3, &[0], &[1]);
        let x = PositiveOperator::new(diag(&[0.5, 0.7, 0.9])).unwrap();
        let a = ctx.grade(&ctx.random_polynomial(3, 2)).odd_part;
        let (lhs, rhs) = estimate_check(&ctx, &x, &[unit(3, 2)], &a).unwrap();
        assert_eq!(rhs, 0.0);
        assert!(lhs <= 1e-9);
        let even = ctx.grade(&ctx.random_polynomial(2, 3)).even_part;
        let (lhs, _) = estimate_check(&ctx, &x, &[], &even).unwrap();
        assert!(lhs <= even.op_norm() + 1e-12);
    }

    #[test]
    fn bound_examples() {
        let zero = CMatrix::zeros(3, 3);
        let r = nuclear_bound(&zero, &zero).unwrap();
        assert_eq!(r.det_bound, 1.0);
        assert_eq!(r.exp_bound, 1.0);
        let r = nuclear_bound(&diag(&[0.5]), &CMatrix::zeros(1, 1)).unwrap();
        assert_relative_eq!(r.det_bound, 2.0, max_relative = 1e-15);
        assert_relative_eq!(r.exp_bound, std::f64::consts::E, max_relative = 1e-15);
        let t = [0.1, 0.35, 0.02, 0.8];
        let r = nuclear_bound(&diag(&t), &CMatrix::zeros(4, 4)).unwrap();
        assert_relative_eq!(r.subset_sum.unwrap(), r.det_bound, max_relative = 1e-12);
        assert!(r.det_bound <= r.exp_t_bound && r.exp_t_bound <= r.exp_bound * (1.0 + 1e-12));
        assert_eq!(subset_sum(&[]), 1.0);
    }

    #[test]
    fn empirical_examples() {
        let ctx = context(3, &[0, 1, 2], &[]);
        let zero = PositiveOperator::new(CMatrix::zeros(3, 3)).unwrap();
        let r = empirical_nuclear_sum(&ctx, &zero, 20, 1).unwrap();
        assert_eq!(r.det_bound, 1.0);
        assert!(r.empirical_sum.unwrap() <= 1.0 + 1e-12);
        for e in r.per_vector.iter().filter(|e| !e.modes.is_empty()) {
            assert!(e.estimate < 1e-14);
        }
        let x = PositiveOperator::new(diag(&[0.3, 0.6, 0.1])).unwrap();
        let r = empirical_nuclear_sum(&ctx, &x, 1, 5).unwrap();
        assert_eq!(r.sample_count, 1);
        for e in &r.per_vector {
            let want = if e.modes.is_empty() { 1.0 } else { 0.0 };
            assert!((e.estimate - want).abs() < 1e-12);
        }
        let r = empirical_nuclear_sum(&ctx, &x, 200, 5).unwrap();
        assert!(r.empirical_sum.unwrap() <= r.det_bound * (1.0 + 1e-9));
        for e in &r.per_vector {
            assert!(e.estimate <= e.bound + 1e-9, "{e:?}");
        }
        let not_sep = context(2, &[0, 1], &[0, 1]);
        assert!(matches!(
            empirical_nuclear_sum(&not_sep, &PositiveOperator::identity(2), 3, 0),
            Err(Error::NotSeparating)
        ));
    }

    #[test]
    fn empirical_is_deterministic() {
        let ctx = context(3, &[0, 2], &[1]);
        let x = PositiveOperator::new(diag(&[0.4, 0.4, 0.7])).unwrap();
        let a = empirical_nuclear_sum(&ctx, &x, 30, 77).unwrap();
        let b = empirical_nuclear_sum(&ctx, &x, 30, 77).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn double_commutant_of_fields() {
        let ctx = context(2, &[0], &[1]);
        let alg = field_algebra(&ctx);
        let gens: Vec<CMatrix> = ctx.generators().into_iter().map(FockOperator::into_matrix).collect();
        let comm = algebra::commutant(4, &gens);
        let double = algebra::commutant(4, &comm.elements());
        assert_eq!(double.dim(), alg.dim());
        assert_eq!(double.intersect(&alg).dim(), alg.dim());
    }

    #[test]
    fn intersection_examples() {
        let l1 = context(2, &[0], &[1]);
        let empty = context(2, &[], &[]);
        let r = double_cone_intersection(&l1, &empty).unwrap();
        assert_eq!(r.dim(), field_algebra(&l1).dim());
        let full = context(2, &[0, 1], &[0, 1]);
        let r = double_cone_intersection(&full, &full).unwrap();
        assert_eq!(r.dim(), 1);
        let nested = double_cone_intersection(&context(3, &[0, 1, 2], &[]), &context(3, &[0], &[])).unwrap();
        assert_eq!(nested.dim(), 4);
        assert!(nested.closure_defect < 1e-9 && nested.commutation_defect < 1e-9 && nested.containment_defect < 1e-9);
        let other = context(2, &[0], &[]);
        assert!(matches!(
            double_cone_intersection(&context(3, &[0], &[]), &other),
            Err(Error::ForeignPair)
        ));
    }
}
