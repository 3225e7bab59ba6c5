//! Finite-dimensional operator algebras as subspaces of `M_n(ℂ)` with the
//! Hilbert–Schmidt inner product: generated algebras, commutants and
//! intersections.

use nalgebra::Dyn;
use num_complex::Complex64;

use crate::linalg::{real_scalar, CMatrix, CVector};

/// Rank decisions on normalised vectors.
pub const RANK_TOL: f64 = 1e-10;

/// Hilbert–Schmidt orthonormal basis of a subspace of `n×n` matrices,
/// stored as the columns of an `n²×k` matrix of column-major vectorisations.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorBasis {
    n: usize,
    columns: CMatrix,
}

impl OperatorBasis {
    fn from_vectors(n: usize, vectors: &[CVector]) -> Self {
        let columns = if vectors.is_empty() {
            CMatrix::zeros(n * n, 0)
        } else {
            CMatrix::from_columns(vectors)
        };
        OperatorBasis { n, columns }
    }

    /// All of `M_n(ℂ)`.
    pub fn full(n: usize) -> Self {
        OperatorBasis {
            n,
            columns: CMatrix::identity(n * n, n * n),
        }
    }

    /// Size of the matrices.
    pub fn matrix_size(&self) -> usize {
        self.n
    }

    /// Dimension of the subspace.
    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn element(&self, i: usize) -> CMatrix {
        unvec(self.n, &self.columns.column(i).into_owned())
    }

    pub fn elements(&self) -> Vec<CMatrix> {
        (0..self.dim()).map(|i| self.element(i)).collect()
    }

    /// Relative Hilbert–Schmidt distance of `a` from the subspace.
    pub fn span_defect(&self, a: &CMatrix) -> f64 {
        let v = vec_of(a);
        let norm = v.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let coeffs = self.columns.adjoint() * &v;
        (&v - &self.columns * coeffs).norm() / norm.max(1.0)
    }

    /// Worst defect of products `BᵢBⱼ` and adjoints `Bᵢ†`.
    pub fn closure_defect(&self) -> f64 {
        let elems = self.elements();
        let mut worst: f64 = 0.0;
        for a in &elems {
            worst = worst.max(self.span_defect(&a.adjoint()));
            for b in &elems {
                worst = worst.max(self.span_defect(&(a * b)));
            }
        }
        worst
    }

    /// Worst commutator norm `‖[B, op]‖_HS` over basis elements and `ops`.
    pub fn commutation_defect(&self, ops: &[CMatrix]) -> f64 {
        let mut worst: f64 = 0.0;
        for b in self.elements() {
            for op in ops {
                worst = worst.max((&b * op - op * &b).norm());
            }
        }
        worst
    }

    /// Subspace intersection `self ∩ other`.
    pub fn intersect(&self, other: &OperatorBasis) -> OperatorBasis {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        if self.dim() == 0 || other.dim() == 0 {
            return OperatorBasis::from_vectors(self.n, &[]);
        }
        // v = U₂c lies in span U₁ iff (1 − U₁U₁†)U₂c = 0.
        let u1 = &self.columns;
        let u2 = &other.columns;
        let residual = u2 - u1 * (u1.adjoint() * u2);
        let kernel = null_space(&residual, 1e-9);
        let vectors: Vec<CVector> = kernel.iter().map(|c| u2 * c).collect();
        OperatorBasis::from_vectors(self.n, &crate::linalg::orthonormalize(&vectors, RANK_TOL))
    }
}

fn vec_of(a: &CMatrix) -> CVector {
    CVector::from_column_slice(a.as_slice())
}

fn unvec(n: usize, v: &CVector) -> CMatrix {
    CMatrix::from_column_slice(n, n, v.as_slice())
}

/// Orthonormal basis of `ker m`, from singular values below
/// `tol·max(1, σ_max)`.
fn null_space(m: &CMatrix, tol: f64) -> Vec<CVector> {
    let cols = m.ncols();
    if cols == 0 {
        return Vec::new();
    }
    let (_, s, v) = crate::linalg::svd(m);
    let smax = s.first().cloned().unwrap_or(0.0);
    let cutoff = tol * smax.max(1.0);
    // columns of V beyond the rank of a short matrix are null directions too
    (0..cols)
        .filter(|&i| s.get(i).is_none_or(|&x| x <= cutoff))
        .map(|i| v.column(i).into_owned())
        .collect()
}

/// Unital algebra generated by `gens` and their adjoints.
pub fn generated_algebra(n: usize, gens: &[CMatrix]) -> OperatorBasis {
    let mut letters: Vec<CMatrix> = Vec::with_capacity(2 * gens.len());
    for g in gens {
        letters.push(g.clone());
        if crate::linalg::hermitian_residual(g) > RANK_TOL * (1.0 + crate::linalg::max_abs(g)) {
            letters.push(g.adjoint());
        }
    }
    let mut basis: Vec<CVector> = Vec::new();
    let mut frontier: Vec<CMatrix> = Vec::new();
    let identity = CMatrix::identity(n, n);
    if try_extend(&mut basis, &identity) {
        frontier.push(identity);
    }
    while !frontier.is_empty() && basis.len() < n * n {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &letters {
                let p = g * w;
                if try_extend(&mut basis, &p) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    OperatorBasis::from_vectors(n, &basis)
}

fn try_extend(basis: &mut Vec<CVector>, a: &CMatrix) -> bool {
    let mut v = vec_of(a);
    let norm = v.norm();
    if norm == 0.0 {
        return false;
    }
    v /= real_scalar(norm);
    for _ in 0..2 {
        for b in basis.iter() {
            let c: Complex64 = b.dotc(&v);
            v -= b * c;
        }
    }
    let r = v.norm();
    if r > RANK_TOL {
        basis.push(v / real_scalar(r));
        true
    } else {
        false
    }
}

/// `{B : [B, op] = 0 for all ops}`. An empty list gives all of `M_n(ℂ)`.
pub fn commutant(n: usize, ops: &[CMatrix]) -> OperatorBasis {
    if ops.is_empty() {
        return OperatorBasis::full(n);
    }
    let id = CMatrix::identity(n, n);
    let n2 = n * n;
    let mut stacked = CMatrix::zeros(ops.len() * n2, n2);
    for (i, op) in ops.iter().enumerate() {
        // vec(op·B − B·op) = (1⊗op − opᵀ⊗1) vec(B)
        let block = id.kronecker(op) - op.transpose().kronecker(&id);
        stacked.view_mut((i * n2, 0), (n2, n2)).copy_from(&block);
    }
    let reduced = reduce_rows(stacked);
    OperatorBasis::from_vectors(n, &null_space(&reduced, 1e-9))
}

/// Replace a tall matrix by the triangular factor of its QR decomposition;
/// the kernel is unchanged.
fn reduce_rows(m: CMatrix) -> CMatrix {
    if m.nrows() <= m.ncols() {
        return m;
    }
    let qr = nalgebra::linalg::QR::<Complex64, Dyn, Dyn>::new(m);
    qr.r()
}
