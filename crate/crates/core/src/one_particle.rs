//! Finite-dimensional one-particle space with an antiunitary involution.
//!
//! The involution is stored as `Γψ = C·conj(ψ)` with `C` unitary and
//! symmetric, which is exactly the condition for `Γ = Γ* = Γ⁻¹`. Every
//! subspace, real span and symplectic test in this module is expressed in
//! that fixed basis.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    conj_mat, conj_vec, hermitian_eigen, hermitian_residual, inner, max_abs_diff, orthonormalize,
    projector, real_scalar, CMatrix, CVector, I, ONE,
};
use crate::tolerance::Tolerances;

/// A complex inner-product space `ℂ^d` together with an antiunitary
/// involution `Γ`.
#[derive(Debug, Clone, PartialEq)]
pub struct OneParticleSpace {
    conj: CMatrix,
    tol: Tolerances,
}

impl OneParticleSpace {
    pub fn new(conj: CMatrix) -> Result<Self> {
        Self::with_tolerances(conj, Tolerances::default())
    }

    pub fn with_tolerances(conj: CMatrix, tol: Tolerances) -> Result<Self> {
        let (rows, cols) = conj.shape();
        if rows != cols || rows == 0 {
            return Err(Error::NotSquare { rows, cols });
        }
        let unitary = max_abs_diff(&(&conj * conj.adjoint()), &CMatrix::identity(rows, rows));
        if unitary > tol.conjugation {
            return Err(Error::NotUnitary { residual: unitary });
        }
        let symmetric = max_abs_diff(&conj, &conj.transpose());
        if symmetric > tol.conjugation {
            return Err(Error::NotSymmetric { residual: symmetric });
        }
        Ok(OneParticleSpace { conj, tol })
    }

    /// `ℂ^d` with `Γ` equal to componentwise complex conjugation.
    pub fn standard(d: usize) -> Result<Self> {
        Self::new(CMatrix::identity(d, d))
    }

    pub fn dim(&self) -> usize {
        self.conj.nrows()
    }

    pub fn conj_matrix(&self) -> &CMatrix {
        &self.conj
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tol
    }

    pub fn gamma(&self, psi: &CVector) -> Result<CVector> {
        self.check_len(psi)?;
        Ok(self.apply_gamma(psi))
    }

    pub(crate) fn apply_gamma(&self, psi: &CVector) -> CVector {
        &self.conj * conj_vec(psi)
    }

    /// `Γ A Γ` for a complex-linear operator `A`.
    pub fn gamma_conjugate(&self, a: &CMatrix) -> CMatrix {
        &self.conj * conj_mat(a) * conj_mat(&self.conj)
    }

    /// Entrywise residual of `ΓAΓ = A`.
    pub fn gamma_commutation_residual(&self, a: &CMatrix) -> f64 {
        max_abs_diff(&self.gamma_conjugate(a), a)
    }

    pub(crate) fn check_len(&self, psi: &CVector) -> Result<()> {
        if psi.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.len(),
            });
        }
        Ok(())
    }

    pub(crate) fn check_square(&self, m: &CMatrix) -> Result<()> {
        let (rows, cols) = m.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rows,
            });
        }
        Ok(())
    }

    /// Orthonormal basis of `ℂ^d` made of `Γ`-fixed vectors (columns).
    ///
    /// Inner products between `Γ`-fixed vectors are real, so orthonormality
    /// in the real inner product `Re⟨·,·⟩` is orthonormality over `ℂ`.
    pub fn real_basis(&self) -> CMatrix {
        let d = self.dim();
        let mut candidates = Vec::with_capacity(2 * d);
        for k in 0..d {
            let e = CVector::from_fn(d, |r, _| if r == k { ONE } else { Complex64::default() });
            candidates.push(&e + self.apply_gamma(&e));
            let ie = &e * I;
            candidates.push(&ie + self.apply_gamma(&ie));
        }
        let basis = orthonormalize(&candidates, 1e-6);
        debug_assert_eq!(basis.len(), d);
        CMatrix::from_columns(&basis)
    }

    /// Eigen-decomposition of a Hermitian operator commuting with `Γ`, with
    /// eigenvectors chosen `Γ`-fixed. Eigenvalues descending.
    pub fn gamma_real_eigenbasis(&self, t: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
        self.check_square(t)?;
        let herm = hermitian_residual(t);
        if herm > self.tol.structural * (1.0 + crate::linalg::max_abs(t)) {
            return Err(Error::NotHermitian { residual: herm });
        }
        let comm = self.gamma_commutation_residual(t);
        if comm > self.tol.structural * (1.0 + crate::linalg::max_abs(t)) {
            return Err(Error::GammaCommutation { residual: comm });
        }
        let u = self.real_basis();
        let local = u.adjoint() * t * &u;
        let d = self.dim();
        let real = DMatrix::<f64>::from_fn(d, d, |r, c| 0.5 * (local[(r, c)].re + local[(c, r)].re));
        let eig = real.symmetric_eigen();
        let mut order: Vec<usize> = (0..d).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let q = CMatrix::from_fn(d, d, |r, c| real_scalar(eig.eigenvectors[(r, order[c])]));
        Ok((values, u * q))
    }
}

/// Two `Γ`-invariant complex subspaces `L_φ`, `L_π` and the real subspace
/// `L = (1+Γ)L_φ + (1−Γ)L_π` they define.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspacePair {
    space: OneParticleSpace,
    proj_phi: CMatrix,
    proj_pi: CMatrix,
    basis_phi: Vec<CVector>,
    basis_pi: Vec<CVector>,
}

impl SubspacePair {
    pub fn new(space: &OneParticleSpace, gens_phi: &[CVector], gens_pi: &[CVector]) -> Result<Self> {
        for g in gens_phi.iter().chain(gens_pi) {
            space.check_len(g)?;
        }
        let tol = space.tol.structural;
        let d = space.dim();
        let basis_phi = orthonormalize(gens_phi, tol);
        let basis_pi = orthonormalize(gens_pi, tol);
        let proj_phi = projector(&basis_phi, d);
        let proj_pi = projector(&basis_pi, d);
        check_invariant(space, "L_phi", &basis_phi, &proj_phi)?;
        check_invariant(space, "L_pi", &basis_pi, &proj_pi)?;
        Ok(SubspacePair {
            space: space.clone(),
            proj_phi,
            proj_pi,
            basis_phi,
            basis_pi,
        })
    }

    /// Pair given directly by projections; their ranges are re-derived.
    pub fn from_projections(space: &OneParticleSpace, proj_phi: &CMatrix, proj_pi: &CMatrix) -> Result<Self> {
        space.check_square(proj_phi)?;
        space.check_square(proj_pi)?;
        let phi: Vec<CVector> = proj_phi.column_iter().map(|c| c.into_owned()).collect();
        let pi: Vec<CVector> = proj_pi.column_iter().map(|c| c.into_owned()).collect();
        Self::new(space, &phi, &pi)
    }

    pub fn space(&self) -> &OneParticleSpace {
        &self.space
    }

    pub fn proj_phi(&self) -> &CMatrix {
        &self.proj_phi
    }

    pub fn proj_pi(&self) -> &CMatrix {
        &self.proj_pi
    }

    pub fn basis_phi(&self) -> &[CVector] {
        &self.basis_phi
    }

    pub fn basis_pi(&self) -> &[CVector] {
        &self.basis_pi
    }

    /// Real-linear spanning set of `L`: `(1+Γ)b`, `(1+Γ)(ib)` over the `L_φ`
    /// basis and `(1−Γ)b`, `(1−Γ)(ib)` over the `L_π` basis.
    pub fn real_span(&self) -> Vec<CVector> {
        let g = |v: &CVector| self.space.apply_gamma(v);
        let mut out = Vec::with_capacity(2 * (self.basis_phi.len() + self.basis_pi.len()));
        for b in &self.basis_phi {
            let ib = b * I;
            out.push(b + g(b));
            out.push(&ib + g(&ib));
        }
        for b in &self.basis_pi {
            let ib = b * I;
            out.push(b - g(b));
            out.push(&ib - g(&ib));
        }
        out
    }

    /// `max |⟨ψ,ξ⟩ − ⟨ξ,ψ⟩|` over the (unnormalised) spanning set of `L`.
    /// Zero certifies `ψ ∈ L′`.
    pub fn symplectic_defect(&self, psi: &CVector) -> Result<f64> {
        self.space.check_len(psi)?;
        Ok(self
            .real_span()
            .iter()
            .map(|xi| (inner(psi, xi) - inner(xi, psi)).norm())
            .fold(0.0, f64::max))
    }

    /// Distance from `ψ` to `L` in the real Hilbert space `ℝ^{2d}`.
    pub fn real_span_distance(&self, psi: &CVector) -> Result<f64> {
        self.space.check_len(psi)?;
        let basis = self.real_span_basis();
        let mut r = psi.clone();
        for b in &basis {
            let c = inner(b, &r).re;
            r -= b * real_scalar(c);
        }
        Ok(r.norm())
    }

    /// Real-orthonormal basis of `L` (orthonormal for `Re⟨·,·⟩`).
    pub fn real_span_basis(&self) -> Vec<CVector> {
        let tol = self.space.tol.structural;
        let mut basis: Vec<CVector> = Vec::new();
        for v in self.real_span() {
            let mut r = v;
            for _ in 0..2 {
                for b in &basis {
                    let c = inner(b, &r).re;
                    r -= b * real_scalar(c);
                }
            }
            let n = r.norm();
            if n > tol {
                basis.push(r / real_scalar(n));
            }
        }
        basis
    }

    /// `ψ′ = (½(1+Γ)(1−E_π) + ½(1−Γ)(1−E_φ))ψ`, an element of `L′`.
    pub fn primed_vector(&self, psi: &CVector) -> Result<CVector> {
        self.space.check_len(psi)?;
        let (u, v) = self.complements(psi);
        Ok(half_sum(&self.space, &u, &v, 1.0))
    }

    /// `ψ″ = (½(1−Γ)(1−E_π) + ½(1+Γ)(1−E_φ))ψ`, an element of `iL′`.
    pub fn double_primed_vector(&self, psi: &CVector) -> Result<CVector> {
        self.space.check_len(psi)?;
        let (u, v) = self.complements(psi);
        Ok(half_sum(&self.space, &u, &v, -1.0))
    }

    fn complements(&self, psi: &CVector) -> (CVector, CVector) {
        (psi - &self.proj_pi * psi, psi - &self.proj_phi * psi)
    }
}

/// `½(1+sΓ)u + ½(1−sΓ)v`.
fn half_sum(space: &OneParticleSpace, u: &CVector, v: &CVector, s: f64) -> CVector {
    let gu = space.apply_gamma(u) * real_scalar(s);
    let gv = space.apply_gamma(v) * real_scalar(s);
    (u + gu + v - gv) * real_scalar(0.5)
}

fn check_invariant(space: &OneParticleSpace, which: &'static str, basis: &[CVector], proj: &CMatrix) -> Result<()> {
    for (index, b) in basis.iter().enumerate() {
        let gb = space.apply_gamma(b);
        let residual = (&gb - proj * &gb).norm();
        if residual > space.tol.structural {
            return Err(Error::NotGammaInvariant { which, index, residual });
        }
    }
    Ok(())
}

/// Positive semidefinite one-particle operator.
#[derive(Debug, Clone, PartialEq)]
pub struct PositiveOperator {
    matrix: CMatrix,
}

impl PositiveOperator {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        let scale = 1.0 + crate::linalg::max_abs(&matrix);
        let herm = hermitian_residual(&matrix);
        if herm > 1e-12 * scale {
            return Err(Error::NotHermitian { residual: herm });
        }
        let min_eigenvalue = crate::linalg::min_eigenvalue(&matrix);
        if min_eigenvalue < -1e-12 * scale {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(PositiveOperator { matrix })
    }

    pub fn identity(d: usize) -> Self {
        PositiveOperator {
            matrix: CMatrix::identity(d, d),
        }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Fails unless `ΓXΓ = X` within the space's structural tolerance.
    pub fn check_gamma(&self, space: &OneParticleSpace) -> Result<()> {
        space.check_square(&self.matrix)?;
        let residual = space.gamma_commutation_residual(&self.matrix);
        if residual > space.tol.structural * (1.0 + crate::linalg::max_abs(&self.matrix)) {
            return Err(Error::GammaCommutation { residual });
        }
        Ok(())
    }
}

/// Sum of singular values.
pub fn trace_norm(t: &CMatrix) -> f64 {
    if t.is_empty() {
        return 0.0;
    }
    t.singular_values().iter().sum()
}

/// `T = (|T_φ|² + |T_π|²)^{1/2}` with `|A|² = A†A`.
pub fn combine_t(t_phi: &CMatrix, t_pi: &CMatrix) -> Result<CMatrix> {
    if t_phi.shape() != t_pi.shape() {
        return Err(Error::DimensionMismatch {
            expected: t_phi.nrows(),
            found: t_pi.nrows(),
        });
    }
    let (rows, cols) = t_phi.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    if rows == 0 {
        return Ok(CMatrix::zeros(0, 0));
    }
    // With [T_φ; T_π] = UΣV†, T = VΣV† without squaring small singular values.
    let mut stacked = CMatrix::zeros(2 * rows, cols);
    stacked.view_mut((0, 0), (rows, cols)).copy_from(t_phi);
    stacked.view_mut((rows, 0), (rows, cols)).copy_from(t_pi);
    let (_, s, v) = crate::linalg::svd(&stacked);
    let v = v.columns(0, s.len()).into_owned();
    let sigma = CMatrix::from_diagonal(&CVector::from_iterator(s.len(), s.iter().map(|&x| real_scalar(x))));
    let t = &v * sigma * v.adjoint();
    Ok((&t + t.adjoint()) * real_scalar(0.5))
}

/// Returns `(exp(2Σtₙ), Π(1−tₙ)^{−2})` over the singular values of `T`:
/// the fermionic bound and its bosonic counterpart.
pub fn fermi_bose_compare(t: &CMatrix) -> Result<(f64, f64)> {
    let values = if t.is_empty() {
        DVector::zeros(0)
    } else {
        t.singular_values()
    };
    if let Some(&value) = values.iter().find(|&&s| s >= 1.0) {
        return Err(Error::SingularValueTooLarge { value });
    }
    let sum: f64 = values.iter().sum();
    let log_bose: f64 = values.iter().map(|&s| -2.0 * (-s).ln_1p()).sum();
    Ok(((2.0 * sum).exp(), log_bose.exp()))
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_spectrum(m: &CMatrix) -> Vec<f64> {
    let mut v = hermitian_eigen(m).0;
    v.reverse();
    v
}
