use serde::{Deserialize, Serialize};

/// Numerical thresholds shared by every construction in the crate.
///
/// `structural` governs exact algebraic identities (projections, invariance,
/// rank decisions); `derived` governs inequalities between computed
/// quantities, which accumulate more rounding.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Unitarity and symmetry of the conjugation matrix.
    pub conjugation: f64,
    pub structural: f64,
    pub derived: f64,
    /// Relative cutoff below which Gram eigenvalues are discarded.
    pub gram_cutoff: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            conjugation: 1e-12,
            structural: 1e-10,
            derived: 1e-9,
            gram_cutoff: 1e-10,
        }
    }
}
