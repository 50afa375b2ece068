//! The special diagrams as a basis of the relation lattice.

use std::collections::HashSet;

use crate::diagram::{enumerate_almost_special, enumerate_special, CrossinglessDiagram};
use crate::dps::{Geometry, PointIndex};
use crate::error::{Error, Result};
use crate::lattice::{BasisSolver, BasisVerdict, LatticePresentation};
use crate::mu::mu;
use crate::scalar::Scalar;

/// Images of the special diagrams in `DSp(2g, 2)` together with a lattice
/// presentation in which they have been verified to form a basis.
#[derive(Debug, Clone)]
pub struct SpecialBasis<T> {
    pub diagrams: Vec<CrossinglessDiagram>,
    pub points: Vec<PointIndex>,
    pub lattice: LatticePresentation<T>,
    solver: BasisSolver<T>,
}

/// Point indices of `μ(d)` for each diagram.
pub fn mu_points(geo: &Geometry, diagrams: &[CrossinglessDiagram]) -> Result<Vec<PointIndex>> {
    diagrams
        .iter()
        .map(|d| {
            let class = mu(d)?;
            geo.space.index_of(&class.point).ok_or(Error::UnknownPoint)
        })
        .collect()
}

/// Images of the almost-special diagrams, without repeats. They span the
/// geometry (their closure is every point) for every genus checked.
pub fn almost_special_seed(geo: &Geometry) -> Result<Vec<PointIndex>> {
    let mut seed = mu_points(geo, &enumerate_almost_special(geo.genus()))?;
    let mut seen = HashSet::new();
    seed.retain(|p| seen.insert(*p));
    Ok(seed)
}

/// The lattice presented on [`almost_special_seed`]; avoids eliminating
/// the full relation matrix.
pub fn lattice_by_closure<T: Scalar>(geo: &Geometry) -> Result<LatticePresentation<T>> {
    LatticePresentation::from_spanning_set(&geo.incidence, &almost_special_seed(geo)?)
}

impl<T: Scalar> SpecialBasis<T> {
    /// Checks unimodularity of the special images by determinant; fails
    /// with [`Error::BasisNotVerified`] otherwise.
    pub fn with_lattice(geo: &Geometry, lattice: LatticePresentation<T>) -> Result<Self> {
        let diagrams = enumerate_special(geo.genus());
        let points = mu_points(geo, &diagrams)?;
        let solver = lattice.basis_solver(&points)?;
        Ok(Self {
            diagrams,
            points,
            lattice,
            solver,
        })
    }

    pub fn verdict(&self) -> Result<BasisVerdict<T>> {
        self.lattice.verify_basis(&self.points)
    }

    /// Integer coefficients of `[μ(d)]` over the special basis, in the order
    /// of [`Self::diagrams`]. The residual is checked to vanish.
    pub fn express(&self, geo: &Geometry, d: &CrossinglessDiagram) -> Result<Vec<T>> {
        if d.genus() != geo.genus() {
            return Err(Error::InvalidGenus {
                genus: d.genus(),
                reason: "diagram genus differs from the lattice genus",
            });
        }
        let point = geo
            .space
            .index_of(&mu(d)?.point)
            .ok_or(Error::UnknownPoint)?;
        self.solver.express(&self.lattice, point)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dps::Limits;
    use crate::lattice::build_lattice;

    #[test]
    fn closure_lattice_matches_smith_form() {
        for g in 1..=3 {
            let (geo, snf) = build_lattice::<i64>(g, &Limits::default()).unwrap();
            let cl = lattice_by_closure::<i64>(&geo).unwrap();
            assert_eq!(cl.free_rank(), snf.free_rank());
            assert_eq!(cl.f2_rank(), snf.f2_rank());
            assert_eq!(cl.relation_rank(), snf.relation_rank());
            assert!(cl.is_torsion_free());
            let a = SpecialBasis::with_lattice(&geo, snf).unwrap();
            let b = SpecialBasis::with_lattice(&geo, cl).unwrap();
            // Coefficients over a basis do not depend on the presentation.
            for p in 0..geo.space.len() {
                assert_eq!(
                    a.solver.express(&a.lattice, p).unwrap(),
                    b.solver.express(&b.lattice, p).unwrap()
                );
            }
        }
    }

    #[test]
    fn members_express_as_unit_vectors() {
        let (geo, lat) = build_lattice::<i64>(3, &Limits::default()).unwrap();
        let basis = SpecialBasis::with_lattice(&geo, lat).unwrap();
        for (i, d) in basis.diagrams.iter().enumerate() {
            let c = basis.express(&geo, d).unwrap();
            assert!(c.iter().enumerate().all(|(j, &x)| x == (i == j) as i64));
        }
        let wrong = CrossinglessDiagram::empty(2);
        assert!(matches!(basis.express(&geo, &wrong), Err(Error::InvalidGenus { .. })));
    }

    #[test]
    fn non_special_is_a_combination() {
        let (geo, lat) = build_lattice::<i64>(3, &Limits::default()).unwrap();
        let basis = SpecialBasis::with_lattice(&geo, lat).unwrap();
        let d = CrossinglessDiagram::parse("(13)", 3).unwrap();
        let c = basis.express(&geo, &d).unwrap();
        let p = geo.space.index_of(&mu(&d).unwrap().point).unwrap();
        let mut sum = vec![0i64; c.len()];
        for (ci, &b) in c.iter().zip(&basis.points) {
            for (s, x) in sum.iter_mut().zip(basis.lattice.coordinates(b).unwrap()) {
                *s += ci * x;
            }
        }
        assert_eq!(sum, basis.lattice.coordinates(p).unwrap());
    }
}
