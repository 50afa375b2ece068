use thiserror::Error;

use crate::diagram::DiagramError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("points are not collinear: intersection has dimension {dim}, expected {expected}")]
    NotCollinear { dim: usize, expected: usize },

    #[error("not a Lagrangian subspace: {0}")]
    NotLagrangian(String),

    #[error("resource limit exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceLimit { what: &'static str, needed: u128, cap: u128 },

    #[error("invalid genus {genus}: {reason}")]
    InvalidGenus { genus: usize, reason: &'static str },

    #[error(transparent)]
    Diagram(#[from] DiagramError),

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("point index {index} out of range ({len} points)")]
    PointOutOfRange { index: usize, len: usize },

    #[error("duplicate point index {0}")]
    DuplicateIndex(usize),

    #[error("expected {expected} basis elements, got {found}")]
    WrongBasisSize { expected: usize, found: usize },

    #[error("basis is not unimodular in the lattice")]
    BasisNotVerified,

    #[error("diagram image is not a point of the lattice's space")]
    UnknownPoint,

    #[error("seed does not span: closure reaches {reached} of {total} points")]
    NotSpanning { reached: usize, total: usize },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
