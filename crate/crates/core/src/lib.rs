//! Special handlebody diagrams, their Lagrangians over `F₂`, and the
//! relation lattice of the binary symplectic dual polar space `DSp(2g, 2)`.
//!
//! * [`gf2`]: packed bit vectors and matrices, the symplectic pairing.
//! * [`dps`]: Lagrangians, lines, closure.
//! * [`diagram`]: crossingless diagrams, reduction, the special family.
//! * [`counts`]: closed-form diagram counts.
//! * [`mu`]: diagram to Lagrangian.
//! * [`lattice`]: Smith normal form and the relation lattice.
//! * [`basis`]: the special diagrams as a lattice basis.
//!
//! Integer code is generic over [`Scalar`]; the aliases below fix the two
//! common choices.

pub mod basis;
pub mod counts;
pub mod diagram;
pub mod dps;
mod error;
pub mod gf2;
pub mod lattice;
pub mod mu;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use num_bigint::BigInt;

pub use basis::SpecialBasis;
pub use diagram::{CrossinglessDiagram, DiagramError};
pub use dps::{Geometry, IsotropicLine, Lagrangian, Limits, PointIndex};
pub use gf2::{BitMatrix, BitVec};
pub use mu::{mu, mu_closed_form, MuClass};

/// Fixed-width scalar: fast, reports overflow as an error.
pub type Int = i64;

pub type IntMatrix = lattice::IntMatrix<Int>;
pub type BigIntMatrix = lattice::IntMatrix<BigInt>;
pub type Lattice = lattice::LatticePresentation<Int>;
pub type BigLattice = lattice::LatticePresentation<BigInt>;
pub type SnfResult = lattice::SnfResult<Int>;
pub type BigSnfResult = lattice::SnfResult<BigInt>;
pub type Basis = basis::SpecialBasis<Int>;
pub type BigBasis = basis::SpecialBasis<BigInt>;
