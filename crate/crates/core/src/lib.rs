//! Fermionic Fock space operators, graded derivations and nuclearity bounds
//! for second-quantized maps `A ↦ XAΩ`, with a rapidity-space pipeline for
//! the wedge algebras of the `S₂ = −1` factorizing model.
//!
//! The guide in `book/` walks through the constructions; its code listings
//! are compiled and run as doc-tests of this crate.

pub mod algebra;
pub mod audit;
pub mod error;
pub mod fields;
pub mod fock;
pub mod ising;
pub mod linalg;
pub mod nuclearity;
pub mod one_particle;
pub mod random;
pub mod tolerance;

pub use error::{Error, Result};
pub use fields::{FieldContext, GradedOperator, Sign};
pub use fock::{FockOperator, FockSpace, Parity};
pub use audit::AuditOutcome;
pub use ising::{Point, RapidityGrid, SpectralReport, WedgeScenario};
pub use linalg::{CMatrix, CVector};
pub use nuclearity::NuclearityReport;
pub use one_particle::{OneParticleSpace, PositiveOperator, SubspacePair};
pub use tolerance::Tolerances;

pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/one-particle.md")]
    mod one_particle {}
    #[doc = include_str!("../../../book/src/fock.md")]
    mod fock {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/nuclearity.md")]
    mod nuclearity {}
    #[doc = include_str!("../../../book/src/algebras.md")]
    mod algebras {}
    #[doc = include_str!("../../../book/src/ising.md")]
    mod ising {}
    #[doc = include_str!("../../../book/src/energy.md")]
    mod energy {}
}
