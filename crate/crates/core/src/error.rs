use thiserror::Error;

/// Errors raised by the operator constructions and reports.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("conjugation matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("conjugation matrix is not symmetric (residual {residual:.3e})")]
    NotSymmetric { residual: f64 },

    #[error("range of {which} is not invariant under the involution: basis vector {index} leaves it by {residual:.3e}")]
    NotGammaInvariant {
        which: &'static str,
        index: usize,
        residual: f64,
    },

    #[error("operator is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("operator does not commute with the involution (residual {residual:.3e})")]
    GammaCommutation { residual: f64 },

    #[error("singular value {value} is not below 1")]
    SingularValueTooLarge { value: f64 },

    #[error("{modes} modes exceed the dense capacity of {max}")]
    Capacity { modes: usize, max: usize },

    #[error("operator has mixed parity")]
    MixedParity,

    #[error("vector is not in the real subspace (distance {distance:.3e})")]
    NotInRealSpan { distance: f64 },

    #[error("the vacuum is not separating for the field algebra")]
    NotSeparating,

    #[error("pair belongs to a different one-particle space")]
    ForeignPair,

    #[error("wedge condition violated: x = ({x0}, {x1}) is not strictly inside the left wedge")]
    WedgeCondition { x0: f64, x1: f64 },

    #[error("damping factor does not decay for x = ({x0}, {x1})")]
    NonIntegrableDamping { x0: f64, x1: f64 },

    #[error("grid resolution insufficient: doubling the grid changed a Gram entry by {relative_change:.3e} (relative)")]
    GridResolution { relative_change: f64 },

    #[error("all Gram eigenvalues were discarded; the basis spans nothing")]
    EmptySubspace,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
