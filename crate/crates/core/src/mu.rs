//! The map from almost-special handlebodies to Lagrangians.
//!
//! For a diagram `d`, `L(d)` is the kernel of `H₁(Σ; F₂) → H₁(Y; F₂)` where
//! `Y` is 0-surgery on the link of `d`. `H₁` of the link complement is free
//! on the puncture loops `γ_i` and one meridian `m_j` per component; the
//! surface class `a_i` maps to `γ_i`, and `b_i` (the boundary of the
//! compressing disk at puncture `i`) maps to the meridian of the component
//! circling `i`, or to zero. Each 0-framed longitude adds the relation
//! `Σ_{i ∈ B_j} γ_i`.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::diagram::{punctures, CrossinglessDiagram};
use crate::dps::Lagrangian;
use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::scalar::{self, Scalar};

/// The `F₂` first-homology presentation of a surgered handlebody.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct H1Presentation {
    pub genus: usize,
    /// `2g` rows (`a₁..a_g, b₁..b_g`) over `g + #blocks` generators
    /// (`γ₁..γ_g, m₁..m_k`).
    pub boundary: BitMatrix,
    /// One row per block.
    pub relations: BitMatrix,
}

impl H1Presentation {
    pub fn new(d: &CrossinglessDiagram) -> Self {
        let g = d.genus();
        let k = d.blocks().len();
        let width = g + k;
        let mut boundary = BitMatrix::zeros(0, width);
        for i in 0..g {
            boundary
                .push_row(BitVec::unit(width, i))
                .expect("row width matches");
        }
        for i in 0..g {
            let mut row = BitVec::zeros(width);
            if let Some(j) = d.blocks().iter().position(|b| b >> i & 1 == 1) {
                row.set(g + j, true);
            }
            boundary.push_row(row).expect("row width matches");
        }
        let relations = BitMatrix::from_rows(
            width,
            d.blocks()
                .iter()
                .map(|&b| BitVec::from_indices(width, punctures(b).map(|p| p - 1)))
                .collect(),
        )
        .expect("row width matches");
        Self {
            genus: g,
            boundary,
            relations,
        }
    }

    /// Surface classes whose image lies in the span of the relations.
    pub fn surface_kernel(&self) -> BitMatrix {
        let g = self.genus;
        let mut stacked = self.boundary.rows().to_vec();
        stacked.extend(self.relations.rows().iter().cloned());
        let stacked =
            BitMatrix::from_rows(self.boundary.ncols(), stacked).expect("row width matches");
        // x · stacked = 0, then forget the relation coefficients.
        let left_kernel = stacked.transpose().kernel();
        let projected = left_kernel
            .rows()
            .iter()
            .map(|v| BitVec::from_indices(2 * g, v.ones().filter(|&i| i < 2 * g)))
            .collect();
        BitMatrix::from_rows(2 * g, projected)
            .expect("row width matches")
            .rref()
            .matrix
    }
}

/// `(−2)^{rank H₂(Y)} · [L(Y)]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MuClass {
    pub h2_rank: u32,
    pub point: Lagrangian,
}

impl MuClass {
    pub fn weight<T: Scalar>(&self) -> Result<T> {
        let minus_two = T::lit(-2);
        let mut w = T::one();
        for _ in 0..self.h2_rank {
            w = scalar::mul(&w, &minus_two, "mu weight")?;
        }
        Ok(w)
    }
}

/// Computes `μ(d)` from the homology presentation.
pub fn mu(d: &CrossinglessDiagram) -> Result<MuClass> {
    let kernel = H1Presentation::new(d).surface_kernel();
    let point = Lagrangian::from_rows(d.genus(), kernel.into_rows()).map_err(|e| {
        Error::InternalInvariant(format!("kernel for {d:?} is not Lagrangian: {e}"))
    })?;
    // Surgery on a minimal crossingless link yields a handlebody: H₂ = 0.
    Ok(MuClass { h2_rank: 0, point })
}

/// Direct spanning set for `μ(d)`: `b_i` for uncircled `i`; for each block,
/// `Σ a_i` and `b_i + b_{i'}` for neighbours `i < i'` in the block.
pub fn mu_closed_form(d: &CrossinglessDiagram) -> Lagrangian {
    let g = d.genus();
    let n = 2 * g;
    let mut rows: Vec<BitVec> = punctures(d.uncircled())
        .map(|p| BitVec::unit(n, g + p - 1))
        .collect();
    for &b in d.blocks() {
        let ps: Vec<usize> = punctures(b).collect();
        rows.push(BitVec::from_indices(n, ps.iter().map(|p| p - 1)));
        for w in ps.windows(2) {
            rows.push(BitVec::from_indices(n, [g + w[0] - 1, g + w[1] - 1]));
        }
    }
    Lagrangian::from_isotropic(g, rows)
}

/// Whether `(−2)^x + (−2)^y + (−2)^z = 0` in the integers.
pub fn triangle_weight_identity(x: u32, y: u32, z: u32) -> bool {
    let term = |n: u32| {
        let mut acc = BigInt::from(1);
        for _ in 0..n {
            acc *= -2;
        }
        acc
    };
    (term(x) + term(y) + term(z)).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str, g: usize) -> CrossinglessDiagram {
        CrossinglessDiagram::parse(s, g).unwrap()
    }

    fn lag(g: usize, rows: &[&str]) -> Lagrangian {
        Lagrangian::from_strs(g, rows).unwrap()
    }

    /// Brute force over all 2^{2g} surface classes: v is in the kernel iff
    /// its image is a sum of relations.
    fn brute_force_kernel(dg: &CrossinglessDiagram) -> Lagrangian {
        let g = dg.genus();
        let p = H1Presentation::new(dg);
        let k = p.relations.nrows();
        let mut members = Vec::new();
        for w in 0u64..1 << (2 * g) {
            let v = BitVec::from_word(2 * g, w);
            let image = p.boundary.transpose().mul_vec(&v).unwrap();
            let hit = (0u64..1 << k).any(|c| {
                p.relations
                    .combine_rows(&BitVec::from_word(k, c))
                    == image
            });
            if hit {
                members.push(v);
            }
        }
        assert_eq!(members.len(), 1 << g);
        Lagrangian::from_rows(g, members).unwrap()
    }

    #[test]
    fn empty_diagram_is_standard() {
        for g in 0..5 {
            let m = mu(&CrossinglessDiagram::empty(g)).unwrap();
            assert_eq!(m.point, Lagrangian::standard(g));
            assert_eq!(m.weight::<i64>().unwrap(), 1);
        }
    }

    #[test]
    fn small_examples() {
        // (12): a1+a2, b1+b2
        assert_eq!(mu(&d("(12)", 2)).unwrap().point, lag(2, &["1100", "0011"]));
        // (1)(2): a1, a2
        assert_eq!(mu(&d("(1)(2)", 2)).unwrap().point, lag(2, &["1000", "0100"]));
        assert_eq!(
            mu_closed_form(&CrossinglessDiagram::empty(3)),
            lag(3, &["000100", "000010", "000001"])
        );
    }

    #[test]
    fn presentation_kernel_matches_brute_force() {
        for g in 0..=3 {
            for dg in crate::diagram::enumerate_almost_special(g) {
                assert_eq!(mu(&dg).unwrap().point, brute_force_kernel(&dg), "{dg:?}");
            }
        }
    }

    #[test]
    fn genus_five_closed_form() {
        let dg = d("(145)(23)", 5);
        let expected = lag(
            5,
            &[
                "1001100000", // a1+a4+a5
                "0000010010", // b1+b4
                "0000000011", // b4+b5
                "0110000000", // a2+a3
                "0000001100", // b2+b3
            ],
        );
        assert_eq!(mu_closed_form(&dg), expected);
        assert_eq!(mu(&dg).unwrap().point, expected);
    }

    #[test]
    fn weights() {
        let point = Lagrangian::standard(1);
        let w = |h2_rank| MuClass { h2_rank, point: point.clone() }.weight::<i64>().unwrap();
        assert_eq!((w(0), w(1), w(2), w(3)), (1, -2, 4, -8));
    }

    #[test]
    fn triangle_identity_examples() {
        assert!(triangle_weight_identity(1, 0, 0));
        assert!(!triangle_weight_identity(0, 0, 0));
        assert!(triangle_weight_identity(2, 1, 1));
        assert!(triangle_weight_identity(1, 2, 1));
        assert!(!triangle_weight_identity(2, 0, 0));
    }
}
