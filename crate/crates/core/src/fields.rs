//! Field operators, the grading automorphism and the odd derivations `δ±`.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fock::{FockOperator, FockSpace, Parity};
use crate::linalg::{max_abs_diff, real_scalar, CMatrix, CVector, I};
use crate::one_particle::SubspacePair;
use crate::random;

/// Which of the two derivations `δ⁺`, `δ⁻`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Even and odd parts `A± = ½(A ± γ(A))`.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedOperator {
    pub even_part: FockOperator,
    pub odd_part: FockOperator,
}

/// A Fock space together with the real subspace `L` whose fields generate
/// the algebra under study.
#[derive(Debug, Clone)]
pub struct FieldContext {
    fock: FockSpace,
    pair: SubspacePair,
    strict: bool,
}

impl FieldContext {
    pub fn new(fock: &FockSpace, pair: &SubspacePair) -> Result<Self> {
        let tol = fock.base().tolerances().structural;
        if pair.space().dim() != fock.modes()
            || max_abs_diff(pair.space().conj_matrix(), fock.base().conj_matrix()) > tol
        {
            return Err(Error::ForeignPair);
        }
        Ok(FieldContext {
            fock: fock.clone(),
            pair: pair.clone(),
            strict: false,
        })
    }

    /// Reject field arguments farther than `1e-8` from `L`.
    pub fn strict(mut self, on: bool) -> Self {
        self.strict = on;
        self
    }

    pub fn fock(&self) -> &FockSpace {
        &self.fock
    }

    pub fn pair(&self) -> &SubspacePair {
        &self.pair
    }

    fn gamma(&self, psi: &CVector) -> CVector {
        self.fock.base().apply_gamma(psi)
    }

    /// `φ(ψ) = a*(ψ) + a(ψ)`.
    pub fn field_phi(&self, psi: &CVector) -> Result<FockOperator> {
        self.fock.base().check_len(psi)?;
        if self.strict {
            let distance = self.pair.real_span_distance(psi)?;
            if distance > 1e-8 {
                return Err(Error::NotInRealSpan { distance });
            }
        }
        let c = self.fock.creator_matrix(psi);
        let m = &c + c.adjoint();
        Ok(self.fock.tagged(m, Parity::Odd))
    }

    /// `φ(ψ) = a*(ψ) + a(Γψ)` (auxiliary field).
    pub fn aux_varphi(&self, psi: &CVector) -> Result<FockOperator> {
        self.fock.base().check_len(psi)?;
        Ok(self.fock.tagged(self.varphi_matrix(psi), Parity::Odd))
    }

    /// `π(ψ) = i(a*(ψ) − a(Γψ))`.
    pub fn aux_pi(&self, psi: &CVector) -> Result<FockOperator> {
        self.fock.base().check_len(psi)?;
        Ok(self.fock.tagged(self.pi_matrix(psi), Parity::Odd))
    }

    fn varphi_matrix(&self, psi: &CVector) -> CMatrix {
        self.fock.creator_matrix(psi) + self.fock.creator_matrix(&self.gamma(psi)).adjoint()
    }

    fn pi_matrix(&self, psi: &CVector) -> CMatrix {
        (self.fock.creator_matrix(psi) - self.fock.creator_matrix(&self.gamma(psi)).adjoint()) * I
    }

    /// `γ(A) = (−1)^N A (−1)^N` split into even and odd parts.
    pub fn grade(&self, a: &FockOperator) -> GradedOperator {
        let (even, odd) = split(a.matrix(), self.fock.parity_signs());
        GradedOperator {
            even_part: self.fock.tagged(even, Parity::Even),
            odd_part: self.fock.tagged(odd, Parity::Odd),
        }
    }

    /// `γ(A)` itself.
    pub fn grading(&self, a: &FockOperator) -> FockOperator {
        let signs = self.fock.parity_signs();
        let m = CMatrix::from_fn(a.matrix().nrows(), a.matrix().ncols(), |r, c| {
            a.matrix()[(r, c)] * (signs[r] * signs[c])
        });
        self.fock.tagged(m, a.parity())
    }

    /// Generator `G± = φ((1∓Γ)ψ) + iπ((1±Γ)ψ)` of `δ±_ψ`.
    pub fn derivation_generator(&self, sign: Sign, psi: &CVector) -> Result<CMatrix> {
        self.fock.base().check_len(psi)?;
        let g = self.gamma(psi);
        let s = real_scalar(sign.value());
        let minus = psi - &g * s;
        let plus = psi + &g * s;
        Ok(self.varphi_matrix(&minus) + self.pi_matrix(&plus) * I)
    }

    /// `δ±_ψ(A) = ½[G±, A⁺] + ½{G±, A⁻}`.
    pub fn delta(&self, sign: Sign, psi: &CVector, a: &FockOperator) -> Result<FockOperator> {
        let g = self.derivation_generator(sign, psi)?;
        let (even, odd) = split(a.matrix(), self.fock.parity_signs());
        let half = real_scalar(0.5);
        let m = (&g * &even - &even * &g) * half + (&g * &odd + &odd * &g) * half;
        let parity = match a.parity() {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
            Parity::Mixed => Parity::Mixed,
        };
        Ok(self.fock.tagged(m, parity))
    }

    /// `(‖δ±_ψ(A)‖, (‖(1∓Γ)E_φψ‖² + ‖(1±Γ)E_πψ‖²)^{1/2}·‖A‖)` for `A` of
    /// definite parity.
    pub fn delta_norm_bound(&self, sign: Sign, psi: &CVector, a: &FockOperator) -> Result<(f64, f64)> {
        if a.parity() == Parity::Mixed {
            return Err(Error::MixedParity);
        }
        let lhs = self.delta(sign, psi, a)?.op_norm();
        let s = real_scalar(sign.value());
        let phi = self.pair.proj_phi() * psi;
        let pi = self.pair.proj_pi() * psi;
        let chi_minus = &phi - self.gamma(&phi) * s;
        let chi_plus = &pi + self.gamma(&pi) * s;
        let coefficient = (chi_minus.norm_squared() + chi_plus.norm_squared()).sqrt();
        Ok((lhs, coefficient * a.op_norm()))
    }

    /// Field operators `φ(ξ)` for the nonzero vectors of the spanning set
    /// of `L`.
    pub fn generators(&self) -> Vec<FockOperator> {
        let tol = self.fock.base().tolerances().structural;
        self.pair
            .real_span()
            .iter()
            .filter(|v| v.norm() > tol)
            .map(|v| self.field_phi_unchecked(v))
            .collect()
    }

    fn field_phi_unchecked(&self, psi: &CVector) -> FockOperator {
        let c = self.fock.creator_matrix(psi);
        self.fock.tagged(&c + c.adjoint(), Parity::Odd)
    }

    /// Seeded element of the polynomial field algebra, rescaled to operator
    /// norm one. Degree zero gives the identity; otherwise the result is a
    /// positive combination of products of `1..=degree` fields `φ(ξ)`, with
    /// each `ξ` a random real combination of the spanning set of `L`.
    pub fn random_polynomial(&self, degree: usize, seed: u64) -> FockOperator {
        let mut rng = random::rng(seed);
        let dim = self.fock.dim();
        if degree == 0 {
            return self.fock.identity();
        }
        let span: Vec<CVector> = self
            .pair
            .real_span()
            .into_iter()
            .filter(|v| v.norm() > self.fock.base().tolerances().structural)
            .collect();
        let mut total = CMatrix::zeros(dim, dim);
        if span.is_empty() {
            return self.fock.tagged(total, Parity::Even);
        }
        for order in 1..=degree {
            let coefficient = rng.random_range(0.5..1.5);
            let mut term = CMatrix::identity(dim, dim);
            for _ in 0..order {
                let mut xi = CVector::zeros(self.fock.modes());
                for v in &span {
                    xi += v * real_scalar(random::normal(&mut rng));
                }
                term = crate::linalg::mul(&term, self.field_phi_unchecked(&xi).matrix());
            }
            total += term * real_scalar(coefficient);
        }
        let norm = crate::linalg::op_norm(&total);
        if norm > 0.0 {
            total /= Complex64::new(norm, 0.0);
        }
        self.fock.operator(total).expect("dimension fixed by the context")
    }
}

fn split(m: &CMatrix, signs: &[f64]) -> (CMatrix, CMatrix) {
    let n = m.nrows();
    let even = CMatrix::from_fn(n, n, |r, c| if signs[r] == signs[c] { m[(r, c)] } else { Default::default() });
    let odd = m - &even;
    (even, odd)
}
