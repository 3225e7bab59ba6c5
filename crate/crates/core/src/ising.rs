//! One-particle computations for the factorizing model with `S₂ = −1`.
//!
//! The one-particle space is `L²(ℝ, dθ)` in rapidity, `p(θ) = m(coshθ, sinhθ)`.
//! The subspace `L_φ(W_L + x)` is spanned by `U(x)ψ_j` and `L_π(W_L + x)`
//! by `U(x)ωψ_j`, with the rational family
//!
//! ```text
//! ψ_j(θ) = f_j(m sinhθ),   f_j(p) = (1 − ip/κ)^{−j}.
//! ```
//!
//! `f_j` is analytic in the upper half plane (its pole sits at `p = −iκ`),
//! so `ψ_j` continues to the strip `0 ≤ Im θ ≤ π/2` in closed form and
//! `Δ^{1/4}ψ(θ) = ψ(θ + iπ/2)` needs no numerical continuation:
//! `ψ_j(θ + iπ/2) = (1 + m coshθ/κ)^{−j}`. This sign convention is the one
//! for which `Δ^{1/4}U(x)` damps rather than amplifies when `x` lies in the
//! left wedge, `|e^{ip(θ+iπ/2)·x}| = e^{−m(x₀ sinhθ − x₁ coshθ)}`.
//!
//! Singular values of `Δ^{1/4}U(x)` restricted to the span of the first `J`
//! basis functions come from the Gram matrices of the functions and of
//! their images; they are lower estimates of the singular values of
//! `Δ^{1/4}E(W_L + x)` and grow monotonically with `J`.

// positivity checks are written as `!(x > 0.0)` so that NaN fails them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use rayon::prelude::*;

use crate::linalg::{hermitian_eigen, psd_sqrt, real_scalar, CMatrix, CVector, I};

/// Gauss–Legendre order of each panel of the composite rule.
pub const PANEL_ORDER: usize = 10;

/// Relative change of a Gram entry under grid doubling that is treated as
/// a resolution failure.
pub const GRAM_REFINEMENT_TOL: f64 = 1e-6;

/// Relative change of a trace estimate under grid doubling above which a
/// report is flagged as not converged.
pub const TRACE_REFINEMENT_TOL: f64 = 1e-3;

/// Label carried by every [`SpectralReport`].
pub const BOUND_STATUS: &str = "conditional on basis exhaustion";

/// Composite Gauss–Legendre rule on `[−θ_max, θ_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RapidityGrid {
    theta_max: f64,
    n_points: usize,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl RapidityGrid {
    pub fn new(theta_max: f64, n_points: usize) -> Result<Self> {
        if !(theta_max > 0.0 && theta_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("theta_max must be positive, got {theta_max}")));
        }
        if n_points == 0 || !n_points.is_multiple_of(PANEL_ORDER) {
            return Err(Error::InvalidParameter(format!(
                "n_points must be a positive multiple of {PANEL_ORDER}, got {n_points}"
            )));
        }
        let (nodes, weights) = composite_rule(-theta_max, theta_max, n_points / PANEL_ORDER);
        Ok(RapidityGrid {
            theta_max,
            n_points,
            nodes,
            weights,
        })
    }

    pub fn theta_max(&self) -> f64 {
        self.theta_max
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Same interval, twice the points.
    pub fn refined(&self) -> RapidityGrid {
        RapidityGrid::new(self.theta_max, 2 * self.n_points).expect("doubling keeps the grid valid")
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&t, &w)| w * f(t)).sum()
    }
}

fn composite_rule(a: f64, b: f64, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let rule = GaussLegendre::new(NonZeroUsize::new(PANEL_ORDER).expect("nonzero order"));
    let width = (b - a) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * PANEL_ORDER);
    let mut weights = Vec::with_capacity(panels * PANEL_ORDER);
    for p in 0..panels {
        let lo = a + p as f64 * width;
        for &(x, w) in rule.as_node_weight_pairs() {
            nodes.push(lo + 0.5 * width * (x + 1.0));
            weights.push(0.5 * width * w);
        }
    }
    (nodes, weights)
}

/// A point `x = (x₀, x₁)` of two-dimensional Minkowski space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x0: f64,
    pub x1: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x0: 0.0, x1: 0.0 };

    pub fn new(x0: f64, x1: f64) -> Self {
        Point { x0, x1 }
    }

    /// `x₁ + |x₀| < 0`.
    pub fn in_left_wedge(&self) -> bool {
        self.x1 + self.x0.abs() < 0.0
    }

    /// `x₁ > |x₀|`.
    pub fn in_right_wedge(&self) -> bool {
        self.x1 > self.x0.abs()
    }
}

impl std::ops::Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x0 + o.x0, self.x1 + o.x1)
    }
}

/// `p(θ)·x = m(x₀ coshθ − x₁ sinhθ)`.
pub fn momentum_dot(m: f64, x: Point, theta: f64) -> f64 {
    m * (x.x0 * theta.cosh() - x.x1 * theta.sinh())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Variant {
    Phi,
    Pi,
}

/// `ψ_j` (variant `Phi`) or `ωψ_{j+1}` (variant `Pi`).
///
/// The `Pi` family starts at exponent 2: `ωψ_1` behaves like `coshθ/sinhθ`
/// at large rapidity and is not square integrable.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisFunction {
    pub index: usize,
    pub kappa: f64,
    pub mass: f64,
    pub variant: Variant,
}

impl BasisFunction {
    pub fn new(index: usize, kappa: f64, mass: f64, variant: Variant) -> Result<Self> {
        if index == 0 {
            return Err(Error::InvalidParameter("basis index starts at 1".into()));
        }
        if !(kappa > 0.0) || !(mass > 0.0) {
            return Err(Error::InvalidParameter("kappa and mass must be positive".into()));
        }
        Ok(BasisFunction {
            index,
            kappa,
            mass,
            variant,
        })
    }

    fn power(&self) -> i32 {
        match self.variant {
            Variant::Phi => self.index as i32,
            Variant::Pi => self.index as i32 + 1,
        }
    }

    /// Value on the real line.
    pub fn real(&self, theta: f64) -> Complex64 {
        let f = Complex64::new(1.0, -self.mass * theta.sinh() / self.kappa).powi(-self.power());
        match self.variant {
            Variant::Phi => f,
            Variant::Pi => f * (self.mass * theta.cosh()),
        }
    }

    /// Value at `θ + iπ/2`.
    pub fn continued(&self, theta: f64) -> Complex64 {
        let f = (1.0 + self.mass * theta.cosh() / self.kappa).powi(-self.power());
        match self.variant {
            Variant::Phi => real_scalar(f),
            Variant::Pi => I * (self.mass * theta.sinh() * f),
        }
    }
}

/// `e^{ip(θ+iπ/2)·x} = e^{−m(x₀ sinhθ − x₁ coshθ)}`.
pub fn damping_factor(m: f64, x: Point, theta: f64) -> Complex64 {
    real_scalar((-m * (x.x0 * theta.sinh() - x.x1 * theta.cosh())).exp())
}

/// Rejects translations for which the damping factor fails to decay at
/// `θ = ±10`; this catches the right wedge and the wedge edge.
pub fn check_damping(m: f64, x: Point) -> Result<()> {
    let worst = [-10.0, 10.0]
        .iter()
        .map(|&t| damping_factor(m, x, t).norm())
        .fold(0.0, f64::max);
    if !(worst < 1.0) {
        return Err(Error::NonIntegrableDamping { x0: x.x0, x1: x.x1 });
    }
    Ok(())
}

/// Samples of `(U(x, B(λ))ψ)(θ) = e^{ip(θ)·x}ψ(θ−λ)` on the grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BoostedSamples {
    pub values: Vec<Complex64>,
    /// Fraction of `‖ψ‖²` on the grid interval that the boost moves outside it.
    pub leakage: f64,
    pub truncated: bool,
}

pub fn boost_translate(
    m: f64,
    x: Point,
    lambda: f64,
    psi: impl Fn(f64) -> Complex64,
    grid: &RapidityGrid,
) -> BoostedSamples {
    let values = grid
        .nodes()
        .iter()
        .map(|&t| Complex64::from_polar(1.0, momentum_dot(m, x, t)) * psi(t - lambda))
        .collect();
    let total = grid.integrate(|t| psi(t).norm_sqr());
    let tm = grid.theta_max();
    let (a, b) = if lambda >= 0.0 {
        ((tm - lambda).max(-tm), tm)
    } else {
        (-tm, (-tm - lambda).min(tm))
    };
    let leaked = if b > a {
        let panels = (((b - a) / (2.0 * tm)) * (grid.n_points() / PANEL_ORDER) as f64).ceil().max(1.0) as usize;
        let (nodes, weights) = composite_rule(a, b, panels);
        nodes.iter().zip(&weights).map(|(&t, &w)| w * psi(t).norm_sqr()).sum()
    } else {
        0.0
    };
    let leakage = if total > 0.0 { leaked / total } else { 0.0 };
    BoostedSamples {
        values,
        leakage,
        truncated: leakage > 1e-8,
    }
}

/// Parameters of one modular-nuclearity computation.
#[derive(Debug, Clone, PartialEq)]
pub struct WedgeScenario {
    pub mass: f64,
    pub x: Point,
    pub basis_size: usize,
    pub kappa: f64,
    pub grid: RapidityGrid,
}

impl WedgeScenario {
    pub fn new(mass: f64, x: Point, basis_size: usize, kappa: f64, grid: RapidityGrid) -> Result<Self> {
        if !(mass > 0.0) || !(kappa > 0.0) {
            return Err(Error::InvalidParameter("mass and kappa must be positive".into()));
        }
        if basis_size == 0 {
            return Err(Error::InvalidParameter("basis size must be at least 1".into()));
        }
        if !x.in_left_wedge() {
            return Err(Error::WedgeCondition { x0: x.x0, x1: x.x1 });
        }
        Ok(WedgeScenario {
            mass,
            x,
            basis_size,
            kappa,
            grid,
        })
    }

    /// `m(|x₁| − |x₀|)`, the decay rate of the damping factor in `coshθ`.
    pub fn damping_rate(&self) -> f64 {
        self.mass * (self.x.x1.abs() - self.x.x0.abs())
    }
}

fn basis(j: usize, kappa: f64, mass: f64, variant: Variant) -> Vec<BasisFunction> {
    (1..=j)
        .map(|i| BasisFunction {
            index: i,
            kappa,
            mass,
            variant,
        })
        .collect()
}

/// Gram matrices `G = (⟨f_j, f_k⟩)` and `M = (⟨Xf_j, Xf_k⟩)` by quadrature,
/// where `image(f, θ)` evaluates `(Xf)(θ)`.
pub fn gram_matrices<F>(funcs: &[BasisFunction], grid: &RapidityGrid, image: F) -> (CMatrix, CMatrix)
where
    F: Fn(&BasisFunction, f64) -> Complex64 + Sync,
{
    let n = grid.n_points();
    let sqrt_w: Vec<f64> = grid.weights().iter().map(|w| w.sqrt()).collect();
    let columns: Vec<(CVector, CVector)> = funcs
        .par_iter()
        .map(|f| {
            let real = CVector::from_fn(n, |r, _| f.real(grid.nodes()[r]) * sqrt_w[r]);
            let img = CVector::from_fn(n, |r, _| image(f, grid.nodes()[r]) * sqrt_w[r]);
            (real, img)
        })
        .collect();
    let (real, img): (Vec<CVector>, Vec<CVector>) = columns.into_iter().unzip();
    let f = CMatrix::from_columns(&real);
    let y = CMatrix::from_columns(&img);
    (f.adjoint() * &f, y.adjoint() * &y)
}

/// Unchecked `(G, M)` for the map `Δ^{1/4}U(x)`: no wedge or damping
/// validation.
pub fn gram_pair(
    mass: f64,
    x: Point,
    kappa: f64,
    basis_size: usize,
    variant: Variant,
    grid: &RapidityGrid,
) -> (CMatrix, CMatrix) {
    let funcs = basis(basis_size, kappa, mass, variant);
    gram_matrices(&funcs, grid, |f, t| damping_factor(mass, x, t) * f.continued(t))
}

fn relative_change(a: &CMatrix, b: &CMatrix) -> f64 {
    let scale = crate::linalg::max_abs(a).max(f64::MIN_POSITIVE);
    crate::linalg::max_abs_diff(a, b) / scale
}

/// `(G, M)` on the scenario grid, verified against the doubled grid.
pub fn wedge_gram(scenario: &WedgeScenario, variant: Variant) -> Result<(CMatrix, CMatrix)> {
    check_damping(scenario.mass, scenario.x)?;
    let s = scenario;
    let (g, m) = gram_pair(s.mass, s.x, s.kappa, s.basis_size, variant, &s.grid);
    let fine = s.grid.refined();
    let (g2, m2) = gram_pair(s.mass, s.x, s.kappa, s.basis_size, variant, &fine);
    let change = relative_change(&g, &g2).max(relative_change(&m, &m2));
    if change > GRAM_REFINEMENT_TOL {
        return Err(Error::GridResolution { relative_change: change });
    }
    Ok((g, m))
}

/// Retained eigenvectors of `G` scaled by `λ^{−1/2}`: columns of an
/// orthonormalising map onto the numerical range of `G`.
fn whitening(g: &CMatrix, cutoff: f64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(g);
    let max = values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..values.len()).filter(|&i| values[i] > cutoff * max && values[i] > 0.0).collect();
    if keep.is_empty() {
        return Err(Error::EmptySubspace);
    }
    Ok(CMatrix::from_fn(g.nrows(), keep.len(), |r, c| {
        vectors[(r, keep[c])] / values[keep[c]].sqrt()
    }))
}

fn sqrt_spectrum(h: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = hermitian_eigen(h).0.into_iter().map(|e| e.max(0.0).sqrt()).collect();
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Singular values of the operator `f ↦ Xf` on `span{f_j}`, from the Gram
/// matrices `G` of the `f_j` and `M` of the `Xf_j`. Eigenvalues of `G` below
/// `cutoff·max` are discarded. Descending.
pub fn singular_values_from_grams(g: &CMatrix, m: &CMatrix, cutoff: f64) -> Result<Vec<f64>> {
    if g.shape() != m.shape() || g.nrows() != g.ncols() {
        return Err(Error::DimensionMismatch {
            expected: g.nrows(),
            found: m.nrows(),
        });
    }
    let w = whitening(g, cutoff)?;
    Ok(sqrt_spectrum(&(w.adjoint() * m * &w)))
}

/// Eigenvalues of `T = (|XE_φ|² + |XE_π|²)^{1/2}` from the joint Gram
/// matrices of both families (φ functions first).
///
/// With isometries `V_φ`, `V_π` onto the two spans and `K = V†X†XV` on each,
/// `T² = V_φK_φV_φ† + V_πK_πV_π†` shares its nonzero spectrum with
/// `D^{1/2}[[1, S], [S†, 1]]D^{1/2}`, `D = K_φ ⊕ K_π`, `S = V_φ†V_π`.
fn joint_t_values(g: &CMatrix, m: &CMatrix, n_phi: usize, cutoff: f64) -> Result<Vec<f64>> {
    let n = g.nrows();
    let n_pi = n - n_phi;
    let block = |a: &CMatrix, r: usize, c: usize, h: usize, w: usize| a.view((r, c), (h, w)).into_owned();
    let w_phi = whitening(&block(g, 0, 0, n_phi, n_phi), cutoff)?;
    let w_pi = whitening(&block(g, n_phi, n_phi, n_pi, n_pi), cutoff)?;
    let k_phi = w_phi.adjoint() * block(m, 0, 0, n_phi, n_phi) * &w_phi;
    let k_pi = w_pi.adjoint() * block(m, n_phi, n_phi, n_pi, n_pi) * &w_pi;
    let overlap = w_phi.adjoint() * block(g, 0, n_phi, n_phi, n_pi) * &w_pi;
    let (a, b) = (w_phi.ncols(), w_pi.ncols());
    let mut gram = CMatrix::identity(a + b, a + b);
    gram.view_mut((0, a), (a, b)).copy_from(&overlap);
    gram.view_mut((a, 0), (b, a)).copy_from(&overlap.adjoint());
    let mut d = CMatrix::zeros(a + b, a + b);
    d.view_mut((0, 0), (a, a)).copy_from(&psd_sqrt(&k_phi));
    d.view_mut((a, a), (b, b)).copy_from(&psd_sqrt(&k_pi));
    Ok(sqrt_spectrum(&(&d * gram * &d)))
}

/// Singular values, trace estimates and bounds for one one-particle map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralReport {
    pub sigma_phi: Vec<f64>,
    pub sigma_pi: Vec<f64>,
    pub trace_phi: f64,
    pub trace_pi: f64,
    /// `exp(2(trace_phi + trace_pi))`.
    pub xi_bound: f64,
    /// Eigenvalues of the combined `T` on the joint span.
    pub t_values: Vec<f64>,
    /// `Π(1 + 2t)`.
    pub det_bound: f64,
    /// `exp(2Σt)`.
    pub exp_t_bound: f64,
    pub basis_size: usize,
    pub theta_max: f64,
    pub n_points: usize,
    pub refined_trace_phi: f64,
    pub refined_trace_pi: f64,
    /// Largest relative change of a trace estimate under grid doubling.
    pub grid_relative_change: f64,
    pub converged: bool,
    /// How far the bounds reach: the traces are finite-rank lower estimates.
    pub bound_status: String,
}

struct Traces {
    sigma_phi: Vec<f64>,
    sigma_pi: Vec<f64>,
    t_values: Vec<f64>,
}

fn spectra<F>(j: usize, kappa: f64, mass: f64, grid: &RapidityGrid, image: &F, cutoff: f64) -> Result<Traces>
where
    F: Fn(&BasisFunction, f64) -> Complex64 + Sync,
{
    let phi = basis(j, kappa, mass, Variant::Phi);
    let pi = basis(j, kappa, mass, Variant::Pi);
    let (g_phi, m_phi) = gram_matrices(&phi, grid, image);
    let (g_pi, m_pi) = gram_matrices(&pi, grid, image);
    let joint: Vec<BasisFunction> = phi.iter().chain(&pi).cloned().collect();
    let (g, m) = gram_matrices(&joint, grid, image);
    Ok(Traces {
        sigma_phi: singular_values_from_grams(&g_phi, &m_phi, cutoff)?,
        sigma_pi: singular_values_from_grams(&g_pi, &m_pi, cutoff)?,
        t_values: joint_t_values(&g, &m, j, cutoff)?,
    })
}

fn relative(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale == 0.0 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn report<F>(j: usize, kappa: f64, mass: f64, grid: &RapidityGrid, image: F) -> Result<SpectralReport>
where
    F: Fn(&BasisFunction, f64) -> Complex64 + Sync,
{
    let cutoff = crate::Tolerances::default().gram_cutoff;
    let coarse = spectra(j, kappa, mass, grid, &image, cutoff)?;
    let fine = spectra(j, kappa, mass, &grid.refined(), &image, cutoff)?;
    let trace_phi: f64 = coarse.sigma_phi.iter().sum();
    let trace_pi: f64 = coarse.sigma_pi.iter().sum();
    let refined_trace_phi: f64 = fine.sigma_phi.iter().sum();
    let refined_trace_pi: f64 = fine.sigma_pi.iter().sum();
    let grid_relative_change = relative(trace_phi, refined_trace_phi).max(relative(trace_pi, refined_trace_pi));
    let det_bound = coarse.t_values.iter().map(|t| 1.0 + 2.0 * t).product();
    let exp_t_bound = (2.0 * coarse.t_values.iter().sum::<f64>()).exp();
    Ok(SpectralReport {
        xi_bound: (2.0 * (trace_phi + trace_pi)).exp(),
        sigma_phi: coarse.sigma_phi,
        sigma_pi: coarse.sigma_pi,
        trace_phi,
        trace_pi,
        t_values: coarse.t_values,
        det_bound,
        exp_t_bound,
        basis_size: j,
        theta_max: grid.theta_max(),
        n_points: grid.n_points(),
        refined_trace_phi,
        refined_trace_pi,
        grid_relative_change,
        converged: grid_relative_change <= TRACE_REFINEMENT_TOL,
        bound_status: BOUND_STATUS.to_string(),
    })
}

/// Trace-norm estimates of `Δ^{1/4}E_φ(W_L+x)` and `Δ^{1/4}E_π(W_L+x)` and
/// the resulting bound on the nuclear norm of `A ↦ Δ^{1/4}U(x)AΩ`. The
/// bound is conditional on the basis exhausting the subspaces.
pub fn modular_nuclearity_report(scenario: &WedgeScenario) -> Result<SpectralReport> {
    if !scenario.x.in_left_wedge() {
        return Err(Error::WedgeCondition {
            x0: scenario.x.x0,
            x1: scenario.x.x1,
        });
    }
    wedge_gram(scenario, Variant::Phi)?;
    wedge_gram(scenario, Variant::Pi)?;
    let s = scenario;
    report(s.basis_size, s.kappa, s.mass, &s.grid, |f, t| damping_factor(s.mass, s.x, t) * f.continued(t))
}

/// Same pipeline for `X = e^{−βω}` on the subspaces of the left wedge at
/// the origin.
pub fn energy_nuclearity_report(
    mass: f64,
    beta: f64,
    basis_size: usize,
    kappa: f64,
    grid: &RapidityGrid,
) -> Result<SpectralReport> {
    if !(beta > 0.0) {
        return Err(Error::InvalidParameter(format!("beta must be positive, got {beta}")));
    }
    if !(mass > 0.0) || !(kappa > 0.0) || basis_size == 0 {
        return Err(Error::InvalidParameter("mass, kappa and basis size must be positive".into()));
    }
    report(basis_size, kappa, mass, grid, |f, t| f.real(t) * (-beta * mass * t.cosh()).exp())
}

/// Descending values as `(index, value)` rows.
pub fn ladder(values: &[f64]) -> Vec<(usize, f64)> {
    values.iter().cloned().enumerate().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use approx::assert_relative_eq;

    fn grid() -> RapidityGrid {
        RapidityGrid::new(12.0, 2000).unwrap()
    }

    #[test]
    fn grid_weights() {
        let g = grid();
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!((g.weights().iter().sum::<f64>() - 24.0).abs() < 1e-10);
        assert!(RapidityGrid::new(12.0, 2005).is_err());
        assert!(RapidityGrid::new(0.0, 2000).is_err());
        // exact for polynomials of degree < 20 per panel
        assert_relative_eq!(g.integrate(|t| t * t), 2.0 * 12f64.powi(3) / 3.0, max_relative = 1e-12);
    }

    #[test]
    fn continued_values_match_complex_evaluation() {
        let z = |t: f64| Complex64::new(t, std::f64::consts::FRAC_PI_2);
        for &(m, kappa) in &[(1.0, 1.0), (0.7, 2.5)] {
            for j in 1..=3 {
                let phi = BasisFunction::new(j, kappa, m, Variant::Phi).unwrap();
                let pi = BasisFunction::new(j, kappa, m, Variant::Pi).unwrap();
                for &t in &[-3.0, -0.4, 0.0, 1.1, 4.0] {
                    let direct = (1.0 - I * m * z(t).sinh() / kappa).powi(-(j as i32));
                    assert!((phi.continued(t) - direct).norm() < 1e-12 * (1.0 + direct.norm()));
                    let direct_pi = m * z(t).cosh() * (1.0 - I * m * z(t).sinh() / kappa).powi(-(j as i32) - 1);
                    assert!((pi.continued(t) - direct_pi).norm() < 1e-12 * (1.0 + direct_pi.norm()));
                }
            }
        }
        let f = BasisFunction::new(1, 1.0, 2.0, Variant::Phi).unwrap();
        assert_relative_eq!(f.continued(0.0).re, 1.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn continued_asymptotics() {
        for j in 1..=3 {
            let f = BasisFunction::new(j, 1.5, 1.0, Variant::Phi).unwrap();
            for &t in &[-8.0f64, 8.0] {
                let closed = (2.0 * 1.5f64).powi(j as i32) * (-(j as f64) * t.abs()).exp();
                assert_relative_eq!(f.continued(t).re, closed, max_relative = 5e-3 * j as f64);
            }
        }
    }

    #[test]
    fn reflection_compatibility() {
        for variant in [Variant::Phi, Variant::Pi] {
            let f = BasisFunction::new(3, 1.3, 0.8, variant).unwrap();
            for &t in &[0.0, 0.5, 2.0, 5.0] {
                assert!((f.real(-t).conj() - f.real(t)).norm() < 1e-14);
            }
        }
        assert!(BasisFunction::new(0, 1.0, 1.0, Variant::Phi).is_err());
    }

    #[test]
    fn damping_matches_continued_phase() {
        let z = |t: f64| Complex64::new(t, std::f64::consts::FRAC_PI_2);
        let x = Point::new(0.3, -1.7);
        for &t in &[-2.0, 0.0, 1.5] {
            let phase = I * 1.2 * (x.x0 * z(t).cosh() - x.x1 * z(t).sinh());
            assert!((damping_factor(1.2, x, t) - phase.exp()).norm() < 1e-12);
        }
        assert_eq!(damping_factor(1.0, Point::ORIGIN, 3.0), real_scalar(1.0));
        let s = 0.8;
        assert_relative_eq!(
            damping_factor(1.0, Point::new(0.0, -s), 2.0).re,
            (-s * 2f64.cosh()).exp(),
            max_relative = 1e-14
        );
        assert!(check_damping(1.0, Point::new(0.0, -1.0)).is_ok());
        assert!(matches!(
            check_damping(1.0, Point::new(0.2, 1.0)),
            Err(Error::NonIntegrableDamping { .. })
        ));
    }

    #[test]
    fn boosts_and_translations() {
        let g = RapidityGrid::new(12.0, 200).unwrap();
        let psi = |t: f64| Complex64::new((-t * t).exp(), 0.3 * t * (-t * t).exp());
        let id = boost_translate(1.0, Point::ORIGIN, 0.0, psi, &g);
        for (v, &t) in id.values.iter().zip(g.nodes()) {
            assert_eq!(*v, psi(t));
        }
        assert!(!id.truncated);
        let x = Point::new(0.4, -1.1);
        let y = Point::new(-0.9, 0.25);
        let one = |_: f64| real_scalar(1.0);
        let ux = boost_translate(1.3, x, 0.0, one, &g);
        assert!(ux.values.iter().all(|v| (v.norm() - 1.0).abs() < 1e-14));
        let uy = boost_translate(1.3, y, 0.0, psi, &g);
        let uxy = boost_translate(1.3, x + y, 0.0, psi, &g);
        for i in 0..g.n_points() {
            assert!((ux.values[i] * uy.values[i] - uxy.values[i]).norm() < 1e-10);
        }
        let shifted = boost_translate(1.0, Point::ORIGIN, 2.0, psi, &g);
        assert!(!shifted.truncated);
        let wide = |t: f64| real_scalar((-(t / 6.0).powi(2)).exp());
        let far = boost_translate(1.0, Point::ORIGIN, 11.0, wide, &g);
        assert!(far.truncated && far.leakage > 0.1);
    }

    #[test]
    fn gram_properties() {
        let sc = WedgeScenario::new(1.0, Point::new(0.0, -1.0), 2, 1.0, grid()).unwrap();
        for variant in [Variant::Phi, Variant::Pi] {
            let (g, m) = wedge_gram(&sc, variant).unwrap();
            for a in [&g, &m] {
                assert!(crate::linalg::hermitian_residual(a) < 1e-14);
                assert!(crate::linalg::min_eigenvalue(a) > 0.0);
            }
            if variant == Variant::Phi {
                assert!(m.iter().all(|z| z.im.abs() < 1e-12));
            }
        }
        let (g, m) = gram_pair(1.0, Point::ORIGIN, 1e12, 1, Variant::Phi, &grid());
        assert_relative_eq!(m[(0, 0)].re, g[(0, 0)].re, max_relative = 1e-6);
        assert_relative_eq!(g[(0, 0)].re, 24.0, max_relative = 1e-6);
        assert!(matches!(
            WedgeScenario::new(1.0, Point::new(0.0, 1.0), 2, 1.0, grid()),
            Err(Error::WedgeCondition { .. })
        ));
    }

    #[test]
    fn coarse_grid_is_rejected() {
        let coarse = RapidityGrid::new(12.0, 20).unwrap();
        let sc = WedgeScenario::new(1.0, Point::new(0.0, -0.5), 3, 1.0, coarse).unwrap();
        assert!(matches!(wedge_gram(&sc, Variant::Phi), Err(Error::GridResolution { .. })));
    }

    #[test]
    fn singular_values_trivial_cases() {
        let id = CMatrix::identity(3, 3);
        let s = singular_values_from_grams(&id, &id, 1e-10).unwrap();
        assert!(s.iter().all(|&v| (v - 1.0).abs() < 1e-14));
        let mut rng = random::rng(5);
        let a = random::matrix(&mut rng, 4, 4);
        let g = a.adjoint() * &a;
        let b = random::matrix(&mut rng, 4, 4);
        let m = b.adjoint() * &b;
        let s1 = singular_values_from_grams(&g, &m, 1e-10).unwrap();
        let s2 = singular_values_from_grams(&g, &(&m * real_scalar(9.0)), 1e-10).unwrap();
        for (x, y) in s1.iter().zip(&s2) {
            assert_relative_eq!(3.0 * x, *y, max_relative = 1e-10);
        }
        assert!(matches!(
            singular_values_from_grams(&CMatrix::zeros(2, 2), &id.view((0, 0), (2, 2)).into_owned(), 1e-10),
            Err(Error::EmptySubspace)
        ));
    }

    #[test]
    fn singular_values_match_explicit_map() {
        let mut rng = random::rng(11);
        for rank in 1..=4 {
            // four functions in ℂ⁶ spanning a `rank`-dimensional space
            let basis = random::matrix(&mut rng, 6, rank);
            let f = &basis * random::matrix(&mut rng, rank, 4);
            let x = random::matrix(&mut rng, 6, 6);
            let g = f.adjoint() * &f;
            let y = &x * &f;
            let m = y.adjoint() * &y;
            let got = singular_values_from_grams(&g, &m, 1e-10).unwrap();
            let q = basis.qr().q();
            let mut want: Vec<f64> = (&x * q).singular_values().iter().cloned().collect();
            want.sort_by(|a, b| b.total_cmp(a));
            assert_eq!(got.len(), rank);
            for (a, b) in got.iter().zip(&want) {
                assert!((a - b).abs() < 1e-8, "rank {rank}: {got:?} vs {want:?}");
            }
        }
    }
}
