use std::collections::{BTreeSet, HashSet};

use rayon::prelude::*;

use crate::dps::{geometric_closure, Incidence, PointIndex};
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::scalar::{self, Scalar};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::sparse::{eliminate_unit_pivots, SparseRow};

const CTX: &str = "lattice coordinates";

/// How the presentation was established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    /// Smith normal form of the full relation matrix.
    SmithForm,
    /// Closure of a spanning seed eliminates all other points; the
    /// leftover relations on the seed go through Smith normal form.
    ClosureReduction,
}

/// `Z^{points}` modulo `p + q + r` for every line `(p, q, r)`, together with
/// an explicit isomorphism of its free part onto `Z^{free_rank}`.
#[derive(Debug, Clone)]
pub struct LatticePresentation<T> {
    route: Route,
    num_points: usize,
    num_lines: usize,
    /// Rank of the relation matrix over the integers.
    relation_rank: usize,
    f2_rank: usize,
    /// Invariant factors greater than one.
    torsion: Vec<T>,
    free_rank: usize,
    /// Row-major `num_points × free_rank`.
    coords: Vec<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasisVerdict<T> {
    Unimodular,
    RankDeficient,
    /// Full rank but `|det| > 1`: the inverse is not integral.
    NonIntegralInverse { determinant: T },
}

/// The relation matrix over `F₂`, one row per line.
pub fn relation_matrix_f2(num_points: usize, lines: &[[usize; 3]]) -> BitMatrix {
    BitMatrix::from_rows(
        num_points,
        lines
            .iter()
            .map(|l| BitVec::from_indices(num_points, l.iter().copied()))
            .collect(),
    )
    .expect("rows have num_points columns")
}

impl<T: Scalar> LatticePresentation<T> {
    /// Unit-pivot sparse elimination of the relation matrix, dense Smith form
    /// of whatever residual block is left.
    pub fn from_relations(num_points: usize, lines: &[[usize; 3]]) -> Result<Self> {
        let rows = lines
            .iter()
            .map(|l| SparseRow::new(l.iter().map(|&p| (p as u32, T::one())).collect()))
            .collect();
        Self::from_relation_rows(num_points, rows)
    }

    /// Same as [`Self::from_relations`] for arbitrary integer relations.
    pub fn from_relation_rows(num_points: usize, rows: Vec<SparseRow<T>>) -> Result<Self> {
        for r in &rows {
            if let Some(&(bad, _)) = r.entries.iter().find(|(c, _)| *c as usize >= num_points) {
                return Err(Error::PointOutOfRange {
                    index: bad as usize,
                    len: num_points,
                });
            }
        }
        let num_lines = rows.len();
        let two = T::lit(2);
        let f2_rank = BitMatrix::from_rows(
            num_points,
            rows.iter()
                .map(|r| {
                    BitVec::from_indices(
                        num_points,
                        r.entries
                            .iter()
                            .filter(|(_, v)| !v.is_multiple_of(&two))
                            .map(|(c, _)| *c as usize),
                    )
                })
                .collect(),
        )
        .expect("rows have num_points columns")
        .rank();
        let elim = eliminate_unit_pivots(rows, num_points)?;
        let is_pivot = elim.is_pivot_col();
        let free_cols: Vec<usize> = (0..num_points).filter(|&c| !is_pivot[c]).collect();
        let mut position = vec![usize::MAX; num_points];
        for (k, &c) in free_cols.iter().enumerate() {
            position[c] = k;
        }
        let width = free_cols.len();

        // Residual block over the non-pivot columns.
        let mut residual = IntMatrix::zeros(elim.residual.len(), width);
        for (i, r) in elim.residual.iter().enumerate() {
            for (c, v) in &r.entries {
                residual[(i, position[*c as usize])] = v.clone();
            }
        }
        let snf = smith_normal_form(&residual, true)?;
        let v = snf.transforms.as_ref().expect("transforms requested").v.clone();
        let residual_rank = snf.rank();

        // Each pivot column as a combination of non-pivot columns, from the
        // last pivot backwards: sign·e_c + Σ v_k e_k = 0.
        let mut expr: Vec<Option<Vec<T>>> = vec![None; num_points];
        for p in elim.pivots.iter().rev() {
            let mut acc = vec![T::zero(); width];
            for (k, val) in &p.row.entries {
                if *k == p.col {
                    continue;
                }
                let f = scalar::neg(&scalar::mul(&p.sign, val, CTX)?, CTX)?;
                let k = *k as usize;
                if is_pivot[k] {
                    let sub = expr[k].as_ref().expect("later pivots are resolved first");
                    for (a, s) in acc.iter_mut().zip(sub) {
                        *a = scalar::add(a, &scalar::mul(&f, s, CTX)?, CTX)?;
                    }
                } else {
                    let a = &mut acc[position[k]];
                    *a = scalar::add(a, &f, CTX)?;
                }
            }
            expr[p.col as usize] = Some(acc);
        }

        // Row vector x over the non-pivot columns maps to (x · V)[rank..].
        let free_rank = width - residual_rank;
        let mut coords = Vec::with_capacity(num_points * free_rank);
        for c in 0..num_points {
            let x: Vec<T> = match &expr[c] {
                Some(e) => e.clone(),
                None => {
                    let mut unit = vec![T::zero(); width];
                    unit[position[c]] = T::one();
                    unit
                }
            };
            for j in residual_rank..width {
                let mut acc = T::zero();
                for (i, xi) in x.iter().enumerate() {
                    if !xi.is_zero() {
                        acc = scalar::add(&acc, &scalar::mul(xi, &v[(i, j)], CTX)?, CTX)?;
                    }
                }
                coords.push(acc);
            }
        }

        Ok(Self {
            route: Route::SmithForm,
            num_points,
            num_lines,
            relation_rank: elim.pivots.len() + residual_rank,
            f2_rank,
            torsion: snf.torsion(),
            free_rank,
            coords,
        })
    }

    /// Presents the lattice on a spanning seed instead of on all points.
    ///
    /// The closure of `seed` writes every point as an integer combination of
    /// the seed (the third point of a line is minus the sum of the other
    /// two). Those closure steps are unit-triangular in the non-seed columns,
    /// so substituting them away is an exact change of presentation: what
    /// is left is `Z^{|seed|}` modulo the substituted form of every line,
    /// which is small enough for [`Self::from_relation_rows`].
    pub fn from_spanning_set(incidence: &Incidence, seed: &[PointIndex]) -> Result<Self> {
        let n = incidence.num_points();
        let mut seen = HashSet::new();
        for &b in seed {
            if b >= n {
                return Err(Error::PointOutOfRange { index: b, len: n });
            }
            if !seen.insert(b) {
                return Err(Error::DuplicateIndex(b));
            }
        }
        let closure = geometric_closure(seed, incidence)?;
        if !closure.is_everything() {
            return Err(Error::NotSpanning {
                reached: closure.len(),
                total: n,
            });
        }
        let k = seed.len();
        let mut derived = vec![T::zero(); n * k];
        for (i, &b) in seed.iter().enumerate() {
            derived[b * k + i] = T::one();
        }
        for step in &closure.steps {
            let [p, q] = step.from;
            for j in 0..k {
                let s = scalar::add(&derived[p * k + j], &derived[q * k + j], CTX)?;
                derived[step.point * k + j] = scalar::neg(&s, CTX)?;
            }
        }
        let leftover: Vec<Vec<(u32, T)>> = (0..incidence.num_lines())
            .into_par_iter()
            .map(|line| {
                let [a, b, c] = incidence.line(line);
                let mut entries = Vec::new();
                for j in 0..k {
                    let s = scalar::add(
                        &scalar::add(&derived[a * k + j], &derived[b * k + j], CTX)?,
                        &derived[c * k + j],
                        CTX,
                    )?;
                    if !s.is_zero() {
                        entries.push((j as u32, s));
                    }
                }
                Ok(entries)
            })
            .collect::<Result<Vec<_>>>()?;
        let distinct: BTreeSet<Vec<(u32, T)>> =
            leftover.into_iter().filter(|e| !e.is_empty()).collect();
        let inner = Self::from_relation_rows(k, distinct.into_iter().map(SparseRow::new).collect())?;

        // coords(p) = derived(p) · inner coords.
        let free = inner.free_rank;
        let mut coords = vec![T::zero(); n * free];
        if free > 0 {
            coords
                .par_chunks_mut(free)
                .enumerate()
                .try_for_each(|(p, out)| -> Result<()> {
                    for (i, x) in derived[p * k..(p + 1) * k].iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (o, y) in out.iter_mut().zip(&inner.coords[i * free..(i + 1) * free]) {
                            if !y.is_zero() {
                                *o = scalar::add(o, &scalar::mul(x, y, CTX)?, CTX)?;
                            }
                        }
                    }
                    Ok(())
                })?;
        }
        Ok(Self {
            route: Route::ClosureReduction,
            num_points: n,
            num_lines: incidence.num_lines(),
            relation_rank: n - k + inner.relation_rank,
            f2_rank: n - k + inner.f2_rank,
            torsion: inner.torsion,
            free_rank: free,
            coords,
        })
    }

    pub fn route(&self) -> Route {
        self.route
    }

    pub fn num_points(&self) -> usize {
        self.num_points
    }

    pub fn num_lines(&self) -> usize {
        self.num_lines
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn relation_rank(&self) -> usize {
        self.relation_rank
    }

    pub fn f2_rank(&self) -> usize {
        self.f2_rank
    }

    pub fn torsion(&self) -> &[T] {
        &self.torsion
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    /// Image of `e_point` in `Z^{free_rank}`.
    pub fn coordinates(&self, point: PointIndex) -> Result<&[T]> {
        if point >= self.num_points {
            return Err(Error::PointOutOfRange {
                index: point,
                len: self.num_points,
            });
        }
        let k = self.free_rank;
        Ok(&self.coords[point * k..(point + 1) * k])
    }

    /// Square matrix whose columns are the coordinates of `points`.
    pub fn coordinate_matrix(&self, points: &[PointIndex]) -> Result<IntMatrix<T>> {
        let k = self.free_rank;
        let mut m = IntMatrix::zeros(k, points.len());
        for (j, &p) in points.iter().enumerate() {
            for (i, v) in self.coordinates(p)?.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn verify_basis(&self, points: &[PointIndex]) -> Result<BasisVerdict<T>> {
        if points.len() != self.free_rank {
            return Err(Error::WrongBasisSize {
                expected: self.free_rank,
                found: points.len(),
            });
        }
        let det = self.coordinate_matrix(points)?.determinant()?;
        Ok(if det.is_zero() {
            BasisVerdict::RankDeficient
        } else if det.is_unit() {
            BasisVerdict::Unimodular
        } else {
            BasisVerdict::NonIntegralInverse { determinant: det }
        })
    }

    /// Precomputes the inverse coordinate matrix of a unimodular basis.
    pub fn basis_solver(&self, points: &[PointIndex]) -> Result<BasisSolver<T>> {
        if self.verify_basis(points)? != BasisVerdict::Unimodular {
            return Err(Error::BasisNotVerified);
        }
        let matrix = self.coordinate_matrix(points)?;
        let snf = smith_normal_form(&matrix, true)?;
        let tr = snf.transforms.expect("transforms requested");
        // u · B · v = I, so B⁻¹ = v · u.
        let inverse = tr.v.mul(&tr.u)?;
        Ok(BasisSolver {
            points: points.to_vec(),
            matrix,
            inverse,
        })
    }

    /// Whether every line's coordinates sum to zero.
    pub fn relations_hold(&self, lines: &[[usize; 3]]) -> Result<bool> {
        for l in lines {
            for j in 0..self.free_rank {
                let mut s = T::zero();
                for &p in l {
                    s = scalar::add(&s, &self.coordinates(p)?[j], CTX)?;
                }
                if !s.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Solves for coordinates in a verified unimodular basis.
#[derive(Debug, Clone)]
pub struct BasisSolver<T> {
    pub points: Vec<PointIndex>,
    matrix: IntMatrix<T>,
    inverse: IntMatrix<T>,
}

impl<T: Scalar> BasisSolver<T> {
    /// The unique integer `c` with `coords(point) = Σ c_i coords(basis_i)`,
    /// checked by substituting back.
    pub fn express(&self, lattice: &LatticePresentation<T>, point: PointIndex) -> Result<Vec<T>> {
        let target = lattice.coordinates(point)?;
        let c = self.inverse.mul_vec(target)?;
        let back = self.matrix.mul_vec(&c)?;
        if back != target {
            return Err(Error::InternalInvariant(format!(
                "nonzero residual expressing point {point}"
            )));
        }
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dps::{Geometry, Limits};
    use num_bigint::BigInt;

    fn line_triples(geo: &Geometry) -> Vec<[usize; 3]> {
        geo.lines.iter().map(|l| l.points).collect()
    }

    #[test]
    fn genus_zero() {
        let lat = LatticePresentation::<i64>::from_relations(1, &[]).unwrap();
        assert_eq!(lat.free_rank(), 1);
        assert_eq!(lat.coordinates(0).unwrap(), &[1]);
    }

    #[test]
    fn genus_one() {
        let lat = LatticePresentation::<i64>::from_relations(3, &[[0, 1, 2]]).unwrap();
        assert_eq!(lat.free_rank(), 2);
        assert!(lat.is_torsion_free());
        let c: Vec<Vec<i64>> = (0..3).map(|p| lat.coordinates(p).unwrap().to_vec()).collect();
        assert!(c[0] != c[1] && c[1] != c[2] && c[0] != c[2]);
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert_eq!(lat.verify_basis(&pair).unwrap(), BasisVerdict::Unimodular);
        }
        assert_eq!(lat.verify_basis(&[1, 1]).unwrap(), BasisVerdict::RankDeficient);
        assert!(matches!(
            lat.verify_basis(&[0, 1, 2]),
            Err(Error::WrongBasisSize { expected: 2, found: 3 })
        ));
    }

    #[test]
    fn torsion_is_reported() {
        // Z^3 / <(1, 1, 0), (1, -1, 0)> = Z/2 + Z.
        let rows = vec![
            SparseRow::new(vec![(0, 1i64), (1, 1)]),
            SparseRow::new(vec![(0, 1), (1, -1)]),
        ];
        let lat = LatticePresentation::from_relation_rows(3, rows).unwrap();
        assert_eq!(lat.torsion(), &[2]);
        assert_eq!(lat.free_rank(), 1);
        assert_eq!(lat.relation_rank(), 2);
        assert_eq!(lat.f2_rank(), 1);
        // Coordinates kill both relations.
        let c: Vec<i64> = (0..3).map(|p| lat.coordinates(p).unwrap()[0]).collect();
        assert_eq!(c[0] + c[1], 0);
        assert_eq!(c[0] - c[1], 0);
        assert_eq!(c[2].abs(), 1);
    }

    #[test]
    fn genus_two_lattice() {
        let geo = Geometry::new(2, &Limits::default()).unwrap();
        let lines = line_triples(&geo);
        let lat = LatticePresentation::<BigInt>::from_relations(geo.space.len(), &lines).unwrap();
        assert_eq!(lat.free_rank(), 5);
        assert!(lat.is_torsion_free());
        assert_eq!(lat.f2_rank(), 10);
        assert!(lat.relations_hold(&lines).unwrap());
    }

    #[test]
    fn routes_agree_genus_three() {
        let geo = Geometry::new(3, &Limits::default()).unwrap();
        let lines = line_triples(&geo);
        let snf = LatticePresentation::<i64>::from_relations(geo.space.len(), &lines).unwrap();
        assert_eq!(snf.free_rank(), 15);
        assert!(snf.is_torsion_free());
        assert!(snf.relations_hold(&lines).unwrap());
        // Any SNF-unimodular basis also passes the certificate route and the
        // two coordinate systems differ by that basis matrix.
        let basis: Vec<usize> = {
            let mut chosen = Vec::new();
            for p in 0..geo.space.len() {
                chosen.push(p);
                let m = snf.coordinate_matrix(&chosen).unwrap();
                let rank = super::super::snf::smith_normal_form(&m, false).unwrap().rank();
                if rank < chosen.len() {
                    chosen.pop();
                }
                if chosen.len() == 15 {
                    break;
                }
            }
            chosen
        };
        let verdict = snf.verify_basis(&basis).unwrap();
        match snf.basis_solver(&basis) {
            Ok(solver) => {
                assert_eq!(verdict, BasisVerdict::Unimodular);
                let cert = LatticePresentation::<i64>::from_spanning_set(&geo.incidence, &basis).unwrap();
                for p in 0..geo.space.len() {
                    assert_eq!(solver.express(&snf, p).unwrap(), cert.coordinates(p).unwrap());
                }
            }
            Err(Error::BasisNotVerified) => {
                assert_ne!(verdict, BasisVerdict::Unimodular);
                assert!(LatticePresentation::<i64>::from_spanning_set(&geo.incidence, &basis).is_err());
            }
            Err(e) => panic!("{e}"),
        }
    }

    #[test]
    fn certificate_rejects_bad_seeds() {
        let geo = Geometry::new(2, &Limits::default()).unwrap();
        assert!(matches!(
            LatticePresentation::<i64>::from_spanning_set(&geo.incidence, &[0, 0]),
            Err(Error::DuplicateIndex(0))
        ));
        assert!(matches!(
            LatticePresentation::<i64>::from_spanning_set(&geo.incidence, &[0, 1]),
            Err(Error::NotSpanning { .. })
        ));
        // All 15 points span; the leftover relations cut them down to 5.
        let all: Vec<usize> = (0..15).collect();
        let lat = LatticePresentation::<i64>::from_spanning_set(&geo.incidence, &all).unwrap();
        assert_eq!(lat.free_rank(), 5);
        assert_eq!(lat.f2_rank(), 10);
        assert!(lat.is_torsion_free());
        assert!(lat.relations_hold(&line_triples(&geo)).unwrap());
    }
}
