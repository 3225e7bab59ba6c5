//! Antisymmetric Fock space over a finite one-particle space.
//!
//! Basis vectors are occupation bitmasks: bit `k` of the index is set when
//! mode `k` is occupied, the vacuum is index 0. Creation operators carry the
//! Jordan–Wigner sign `(−1)^{#occupied modes below k}`, so that
//! `a*_{k₁}···a*_{kₙ}Ω` with `k₁ < … < kₙ` is exactly the basis vector with
//! those bits set.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linalg::{max_abs, CMatrix, CVector, ONE, ZERO};
use crate::one_particle::OneParticleSpace;

/// Largest number of modes accepted for dense matrices.
pub const MAX_MODES: usize = 14;

/// Behaviour of an operator under conjugation by `(−1)^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    matrix: CMatrix,
    parity: Parity,
}

impl FockOperator {
    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn parity(&self) -> Parity {
        self.parity
    }

    pub fn op_norm(&self) -> f64 {
        crate::linalg::op_norm(&self.matrix)
    }

    pub fn adjoint(&self) -> FockOperator {
        FockOperator {
            matrix: self.matrix.adjoint(),
            parity: self.parity,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FockSpace {
    base: OneParticleSpace,
    signs: Vec<f64>,
}

impl FockSpace {
    pub fn new(base: &OneParticleSpace) -> Result<Self> {
        let modes = base.dim();
        if modes > MAX_MODES {
            return Err(Error::Capacity {
                modes,
                max: MAX_MODES,
            });
        }
        let signs = (0..1usize << modes)
            .map(|n| if n.count_ones() % 2 == 0 { 1.0 } else { -1.0 })
            .collect();
        Ok(FockSpace {
            base: base.clone(),
            signs,
        })
    }

    pub fn base(&self) -> &OneParticleSpace {
        &self.base
    }

    pub fn modes(&self) -> usize {
        self.base.dim()
    }

    pub fn dim(&self) -> usize {
        1 << self.modes()
    }

    pub fn vacuum(&self) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[0] = ONE;
        v
    }

    /// `(−1)^{N}` on each basis vector.
    pub fn parity_signs(&self) -> &[f64] {
        &self.signs
    }

    /// Wraps a matrix, tagging its parity.
    pub fn operator(&self, matrix: CMatrix) -> Result<FockOperator> {
        let (rows, cols) = matrix.shape();
        if rows != cols {
            return Err(Error::NotSquare { rows, cols });
        }
        if rows != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rows,
            });
        }
        let parity = classify(&matrix, &self.signs, self.base.tolerances().structural);
        Ok(FockOperator { matrix, parity })
    }

    pub(crate) fn tagged(&self, matrix: CMatrix, parity: Parity) -> FockOperator {
        debug_assert_eq!(matrix.nrows(), self.dim());
        FockOperator { matrix, parity }
    }

    pub fn identity(&self) -> FockOperator {
        self.tagged(CMatrix::identity(self.dim(), self.dim()), Parity::Even)
    }

    /// `a*(ψ) = Σ_k ψ_k a*_k`, complex linear in `ψ`.
    pub fn creator(&self, psi: &CVector) -> Result<FockOperator> {
        self.base.check_len(psi)?;
        Ok(self.tagged(self.creator_matrix(psi), Parity::Odd))
    }

    /// `a(ψ) = a*(ψ)†`, antilinear in `ψ`.
    pub fn annihilator(&self, psi: &CVector) -> Result<FockOperator> {
        self.base.check_len(psi)?;
        Ok(self.tagged(self.creator_matrix(psi).adjoint(), Parity::Odd))
    }

    pub(crate) fn creator_matrix(&self, psi: &CVector) -> CMatrix {
        let d = self.modes();
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for n in 0..dim {
            for (k, &amp) in psi.iter().enumerate().take(d) {
                if n & (1 << k) != 0 || amp == ZERO {
                    continue;
                }
                m[(n | (1 << k), n)] += amp * jw_sign(n, k);
            }
        }
        m
    }

    /// `a*(ψ)v` without building the matrix.
    pub fn apply_creator(&self, psi: &CVector, v: &CVector) -> Result<CVector> {
        self.base.check_len(psi)?;
        if v.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: v.len(),
            });
        }
        let mut out = CVector::zeros(self.dim());
        for (n, &c) in v.iter().enumerate() {
            if c == ZERO {
                continue;
            }
            for (k, &amp) in psi.iter().enumerate() {
                if n & (1 << k) == 0 {
                    out[n | (1 << k)] += amp * c * jw_sign(n, k);
                }
            }
        }
        Ok(out)
    }

    /// `a*(ψ₁)···a*(ψₙ)Ω`. Linearly dependent inputs give the zero vector.
    pub fn slater(&self, psis: &[CVector]) -> Result<CVector> {
        let mut v = self.vacuum();
        for psi in psis.iter().rev() {
            v = self.apply_creator(psi, &v)?;
        }
        Ok(v)
    }

    /// Second quantization `Λ(X) = ⊕ₙ X^{⊗n}`, assembled sector by sector
    /// from minors: `⟨K|Λ(X)|J⟩ = det X[K, J]` for occupation sets of equal
    /// size, rows and columns in increasing mode order.
    pub fn second_quantize(&self, x: &CMatrix) -> Result<FockOperator> {
        self.base.check_square(x)?;
        let d = self.modes();
        let dim = self.dim();
        let mut sectors: Vec<Vec<usize>> = vec![Vec::new(); d + 1];
        for n in 0..dim {
            sectors[n.count_ones() as usize].push(n);
        }
        let entries: Vec<(usize, usize, Complex64)> = sectors
            .par_iter()
            .flat_map_iter(|sector| {
                sector.iter().flat_map(move |&row| {
                    sector.iter().map(move |&col| (row, col, minor(x, row, col)))
                })
            })
            .collect();
        let mut m = CMatrix::zeros(dim, dim);
        for (r, c, v) in entries {
            m[(r, c)] = v;
        }
        Ok(self.tagged(m, Parity::Even))
    }

    /// Diagonal `(−1)^N`.
    pub fn parity_operator(&self) -> FockOperator {
        let diag = CVector::from_iterator(self.dim(), self.signs.iter().map(|&s| Complex64::new(s, 0.0)));
        self.tagged(CMatrix::from_diagonal(&diag), Parity::Even)
    }

    /// Diagonal `S = (−1)^{N(N−1)/2}`.
    pub fn s_matrix(&self) -> FockOperator {
        let diag = CVector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|n| {
                let p = n.count_ones() as usize;
                let s = if (p * p.saturating_sub(1) / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
                Complex64::new(s, 0.0)
            }),
        );
        self.tagged(CMatrix::from_diagonal(&diag), Parity::Even)
    }
}

fn jw_sign(n: usize, k: usize) -> f64 {
    if (n & ((1 << k) - 1)).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn bits(mut n: usize) -> Vec<usize> {
    let mut out = Vec::with_capacity(n.count_ones() as usize);
    while n != 0 {
        let k = n.trailing_zeros() as usize;
        out.push(k);
        n &= n - 1;
    }
    out
}

fn minor(x: &CMatrix, rows: usize, cols: usize) -> Complex64 {
    let r = bits(rows);
    let c = bits(cols);
    match r.len() {
        0 => ONE,
        1 => x[(r[0], c[0])],
        n => DMatrix::from_fn(n, n, |i, j| x[(r[i], c[j])]).determinant(),
    }
}

fn classify(m: &CMatrix, signs: &[f64], tol: f64) -> Parity {
    let mut even: f64 = 0.0;
    let mut odd: f64 = 0.0;
    for ((r, c), z) in m.iter().enumerate().map(|(i, z)| ((i % m.nrows(), i / m.nrows()), z)) {
        if signs[r] == signs[c] {
            even = even.max(z.norm());
        } else {
            odd = odd.max(z.norm());
        }
    }
    let scale = tol * (1.0 + max_abs(m));
    if odd <= scale {
        Parity::Even
    } else if even <= scale {
        Parity::Odd
    } else {
        Parity::Mixed
    }
}
