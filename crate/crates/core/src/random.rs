//! Seeded generators for random instances: spaces, subspace pairs,
//! positive operators.
//!
//! Every generator draws from a `ChaCha8Rng`, so an instance is a pure
//! function of the seed it was built from.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{real_scalar, CMatrix, CVector};
use crate::one_particle::{OneParticleSpace, PositiveOperator, SubspacePair};

pub type InstanceRng = ChaCha8Rng;

pub fn rng(seed: u64) -> InstanceRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Independent stream `index` of the master `seed`.
pub fn stream(seed: u64, index: u64) -> InstanceRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(index);
    r
}

pub fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Gaussian vector with entries of variance `1/d`.
pub fn vector<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CVector {
    let scale = 1.0 / (2.0 * d as f64).sqrt();
    DVector::from_fn(d, |_, _| Complex64::new(normal(rng), normal(rng)) * scale)
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> CMatrix {
    let scale = 1.0 / (2.0 * rows.max(1) as f64).sqrt();
    CMatrix::from_fn(rows, cols, |_, _| Complex64::new(normal(rng), normal(rng)) * scale)
}

pub fn unitary<R: Rng + ?Sized>(rng: &mut R, d: usize) -> CMatrix {
    matrix(rng, d, d).qr().q()
}

/// `Γ` with a random symmetric unitary `C = UUᵀ`.
pub fn space<R: Rng + ?Sized>(rng: &mut R, d: usize) -> OneParticleSpace {
    let u = unitary(rng, d);
    let c = &u * u.transpose();
    let c = (&c + c.transpose()) * real_scalar(0.5);
    OneParticleSpace::new(c).expect("UUᵀ is symmetric unitary")
}

/// Random `Γ`-fixed vector `(1+Γ)v`.
pub fn gamma_fixed<R: Rng + ?Sized>(rng: &mut R, space: &OneParticleSpace) -> CVector {
    let v = vector(rng, space.dim());
    let g = space.gamma(&v).expect("matching dimension");
    v + g
}

/// Pair whose ranges are spanned by random `Γ`-fixed vectors, of
/// dimensions drawn uniformly from `0..=d`.
pub fn pair<R: Rng + ?Sized>(rng: &mut R, space: &OneParticleSpace) -> SubspacePair {
    let d = space.dim();
    let n_phi = rng.random_range(0..=d);
    let n_pi = rng.random_range(0..=d);
    let phi: Vec<CVector> = (0..n_phi).map(|_| gamma_fixed(rng, space)).collect();
    let pi: Vec<CVector> = (0..n_pi).map(|_| gamma_fixed(rng, space)).collect();
    SubspacePair::new(space, &phi, &pi).expect("spans of Γ-fixed vectors are Γ-invariant")
}

/// Random positive operator commuting with `Γ`, operator norm about one.
pub fn positive_gamma_operator<R: Rng + ?Sized>(rng: &mut R, space: &OneParticleSpace) -> PositiveOperator {
    let d = space.dim();
    let a = matrix(rng, d, d);
    let x0 = a.adjoint() * &a;
    let x = (&x0 + space.gamma_conjugate(&x0)) * real_scalar(0.5);
    let x = (&x + x.adjoint()) * real_scalar(0.5);
    PositiveOperator::new(x).expect("symmetrised Gram matrix is positive")
}

/// Random matrix with singular values drawn from `[0, max_norm)`, never zero.
pub fn contraction<R: Rng + ?Sized>(rng: &mut R, d: usize, max_norm: f64) -> CMatrix {
    let u = unitary(rng, d);
    let v = unitary(rng, d);
    let s = DVector::from_fn(d, |_, _| real_scalar(rng.random_range(0.0..max_norm)));
    let mut t = &u * CMatrix::from_diagonal(&s) * v.adjoint();
    if crate::linalg::max_abs(&t) == 0.0 {
        t[(0, 0)] = real_scalar(max_norm * 0.5);
    }
    t
}

/// Pair built from a random rotation of a `Γ`-fixed orthonormal basis,
/// each direction assigned to `L_φ`, to `L_π` or to neither. The fields
/// over such an `L` form a Clifford algebra for which the vacuum is
/// separating.
pub fn separating_pair<R: Rng + ?Sized>(rng: &mut R, space: &OneParticleSpace) -> SubspacePair {
    let d = space.dim();
    let gauss = DMatrix::<f64>::from_fn(d, d, |_, _| normal(rng));
    let rotation = gauss.qr().q().map(real_scalar);
    let basis = space.real_basis() * rotation;
    let mut phi = Vec::new();
    let mut pi = Vec::new();
    for k in 0..d {
        match rng.random_range(0..3) {
            0 => phi.push(basis.column(k).into_owned()),
            1 => pi.push(basis.column(k).into_owned()),
            _ => {}
        }
    }
    SubspacePair::new(space, &phi, &pi).expect("spans of Γ-fixed vectors are Γ-invariant")
}
