//! Exact integer linear algebra for the relation lattice
//! `L(Σ_g) = Z^{points} / ⟨p + q + r : (p, q, r) a line⟩`.

mod matrix;
mod presentation;
mod snf;
mod sparse;

pub use matrix::IntMatrix;
pub use presentation::{relation_matrix_f2, BasisSolver, BasisVerdict, LatticePresentation, Route};
pub use snf::{smith_normal_form, SnfResult, SnfTransforms};
pub use sparse::{eliminate_unit_pivots, Elimination, PivotRow, SparseRow};

use crate::dps::{Geometry, Limits};
use crate::error::Result;
use crate::scalar::Scalar;

/// Enumerates `DSp(2g, 2)` and presents its relation lattice by Smith form.
pub fn build_lattice<T: Scalar>(g: usize, limits: &Limits) -> Result<(Geometry, LatticePresentation<T>)> {
    let geo = Geometry::new(g, limits)?;
    let lines: Vec<[usize; 3]> = geo.lines.iter().map(|l| l.points).collect();
    let lattice = LatticePresentation::from_relations(geo.space.len(), &lines)?;
    Ok((geo, lattice))
}
