//! Small dense helpers over `nalgebra` complex matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

/// `<a, b>`, antilinear in the first argument.
pub fn inner(a: &CVector, b: &CVector) -> Complex64 {
    a.dotc(b)
}

pub fn conj_vec(v: &CVector) -> CVector {
    v.map(|z| z.conj())
}

pub fn conj_mat(m: &CMatrix) -> CMatrix {
    m.map(|z| z.conj())
}

fn to_faer(m: &CMatrix) -> faer::Mat<Complex64> {
    faer::Mat::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

fn from_faer(m: faer::MatRef<'_, Complex64>) -> CMatrix {
    CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| m[(i, j)])
}

/// `a·b` through faer's blocked kernels. nalgebra multiplies complex
/// matrices with scalar loops, which dominates the Fock-space audits.
pub fn mul(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.ncols(), b.nrows(), "inner dimensions differ");
    if a.nrows() * a.ncols() * b.ncols() < 4096 {
        return a * b;
    }
    from_faer((to_faer(a) * to_faer(b)).as_ref())
}

/// Largest singular value; zero for empty matrices.
pub fn op_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    let s = to_faer(m).singular_values().expect("SVD iteration converges");
    s.into_iter().fold(0.0, f64::max)
}

/// Full singular value decomposition `m = U·diag(s)·V†`, `s` descending.
///
/// Computed with faer: nalgebra's decomposition returns wrong factors for
/// rank-deficient input once singular vectors are requested.
pub fn svd(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let (rows, cols) = m.shape();
    if rows == 0 || cols == 0 {
        return (CMatrix::identity(rows, rows), Vec::new(), CMatrix::identity(cols, cols));
    }
    let dec = to_faer(m).svd().expect("SVD iteration converges");
    let s = dec.S().column_vector();
    (
        from_faer(dec.U()),
        (0..rows.min(cols)).map(|i| s[i].re).collect(),
        from_faer(dec.V()),
    )
}

pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermitian_residual(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = m.nrows();
    if n == 0 {
        return (Vec::new(), CMatrix::zeros(0, 0));
    }
    let herm = (m + m.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = herm.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    (values, vectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).0.first().copied().unwrap_or(0.0)
}

/// Positive square root of a Hermitian positive semidefinite matrix;
/// negative rounding eigenvalues are clamped to zero.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (values, vectors) = hermitian_eigen(m);
    let roots = DVector::from_iterator(
        values.len(),
        values.iter().map(|&v| Complex64::new(v.max(0.0).sqrt(), 0.0)),
    );
    &vectors * CMatrix::from_diagonal(&roots) * vectors.adjoint()
}

/// Modified Gram-Schmidt (two passes) keeping directions whose residual
/// norm exceeds `tol`.
pub fn orthonormalize(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    let mut basis: Vec<CVector> = Vec::new();
    for v in vectors {
        let mut r = v.clone();
        for _ in 0..2 {
            for b in &basis {
                let c = inner(b, &r);
                r -= b * c;
            }
        }
        let norm = r.norm();
        if norm > tol {
            basis.push(r / Complex64::new(norm, 0.0));
        }
    }
    basis
}

/// Orthogonal projection onto the span of an orthonormal family.
pub fn projector(basis: &[CVector], dim: usize) -> CMatrix {
    let mut p = CMatrix::zeros(dim, dim);
    for b in basis {
        p += b * b.adjoint();
    }
    p
}

pub fn real_scalar(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;

    #[test]
    fn blocked_product_matches_nalgebra() {
        let mut rng = random::rng(8);
        for (r, k, c) in [(1, 1, 1), (3, 5, 2), (40, 33, 17), (64, 64, 64)] {
            let a = random::matrix(&mut rng, r, k);
            let b = random::matrix(&mut rng, k, c);
            assert!(max_abs_diff(&mul(&a, &b), &(&a * &b)) < 1e-12);
        }
        let a = random::matrix(&mut rng, 20, 20);
        assert!((op_norm(&a) - a.singular_values().max()).abs() < 1e-12);
        assert_eq!(op_norm(&CMatrix::zeros(0, 3)), 0.0);
    }

    #[test]
    fn svd_of_rank_deficient_matrices() {
        let mut rng = random::rng(1);
        for trial in 0..300 {
            let (r, c, k) = (1 + trial % 7, 1 + (trial / 7) % 7, 1 + trial % 3);
            let m = random::matrix(&mut rng, r, k) * random::matrix(&mut rng, k, c);
            let (u, s, v) = svd(&m);
            let mut sigma = CMatrix::zeros(r, c);
            for (i, &x) in s.iter().enumerate() {
                sigma[(i, i)] = real_scalar(x);
            }
            assert!((&u * sigma * v.adjoint() - &m).norm() < 1e-12);
            assert!((u.adjoint() * &u - CMatrix::identity(r, r)).norm() < 1e-12);
            assert!((v.adjoint() * &v - CMatrix::identity(c, c)).norm() < 1e-12);
            assert!(s.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn psd_sqrt_squares_back() {
        let mut rng = random::rng(2);
        let a = random::matrix(&mut rng, 5, 5);
        let p = a.adjoint() * &a;
        let r = psd_sqrt(&p);
        assert!((&r * &r - &p).norm() < 1e-12);
        assert!(min_eigenvalue(&r) > -1e-12);
    }
}
