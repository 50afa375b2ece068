use crate::error::Result;
use crate::scalar::Scalar;

use super::matrix::IntMatrix;

/// Unimodular transforms with `u · m · v = diag`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfTransforms<T> {
    pub u: IntMatrix<T>,
    pub v: IntMatrix<T>,
    pub v_inv: IntMatrix<T>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult<T> {
    pub rows: usize,
    pub cols: usize,
    /// Nonzero invariant factors `d₁ | d₂ | …`, all positive.
    pub invariant_factors: Vec<T>,
    pub transforms: Option<SnfTransforms<T>>,
}

impl<T: Scalar> SnfResult<T> {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Rank of `Z^cols / rowspace`.
    pub fn cokernel_free_rank(&self) -> usize {
        self.cols - self.rank()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<T> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    /// The diagonal matrix `S`.
    pub fn diagonal_matrix(&self) -> IntMatrix<T> {
        let mut s = IntMatrix::zeros(self.rows, self.cols);
        for (i, d) in self.invariant_factors.iter().enumerate() {
            s[(i, i)] = d.clone();
        }
        s
    }
}

struct Work<T: Scalar> {
    a: IntMatrix<T>,
    tr: Option<SnfTransforms<T>>,
}

impl<T: Scalar> Work<T> {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        if let Some(tr) = &mut self.tr {
            tr.u.swap_rows(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        if let Some(tr) = &mut self.tr {
            tr.v.swap_cols(i, j);
            tr.v_inv.swap_rows(i, j);
        }
    }

    /// `row[dst] -= f · row[src]`
    fn row_op(&mut self, dst: usize, src: usize, f: &T) -> Result<()> {
        self.a.row_sub_mul(dst, src, f)?;
        if let Some(tr) = &mut self.tr {
            tr.u.row_sub_mul(dst, src, f)?;
        }
        Ok(())
    }

    /// `col[dst] -= f · col[src]`; the inverse gains `row[src] += f · row[dst]`.
    fn col_op(&mut self, dst: usize, src: usize, f: &T) -> Result<()> {
        self.a.col_sub_mul(dst, src, f)?;
        if let Some(tr) = &mut self.tr {
            tr.v.col_sub_mul(dst, src, f)?;
            tr.v_inv.row_sub_mul(src, dst, &-f.clone())?;
        }
        Ok(())
    }

    fn negate_row(&mut self, i: usize) -> Result<()> {
        self.a.negate_row(i)?;
        if let Some(tr) = &mut self.tr {
            tr.u.negate_row(i)?;
        }
        Ok(())
    }

    /// Smallest nonzero entry in the trailing block, by absolute value.
    fn smallest_in_block(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        for i in t..self.a.nrows() {
            for j in t..self.a.ncols() {
                let v = &self.a[(i, j)];
                if !v.is_zero() && best.as_ref().is_none_or(|(_, _, b)| v.abs() < *b) {
                    best = Some((i, j, v.abs()));
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    /// Smallest nonzero entry in row `t` or column `t` beyond the pivot.
    fn smallest_in_cross(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, T)> = None;
        let mut consider = |i: usize, j: usize, v: &T| {
            if !v.is_zero() && best.as_ref().is_none_or(|(_, _, b)| v.abs() < *b) {
                best = Some((i, j, v.abs()));
            }
        };
        for i in t..self.a.nrows() {
            consider(i, t, &self.a[(i, t)]);
        }
        for j in t + 1..self.a.ncols() {
            consider(t, j, &self.a[(t, j)]);
        }
        best.map(|(i, j, _)| (i, j))
    }
}

/// Smith normal form by Euclidean row and column reduction. Transforms are
/// tracked (and returned) only when requested.
pub fn smith_normal_form<T: Scalar>(m: &IntMatrix<T>, with_transforms: bool) -> Result<SnfResult<T>> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut w = Work {
        a: m.clone(),
        tr: with_transforms.then(|| SnfTransforms {
            u: IntMatrix::identity(rows),
            v: IntMatrix::identity(cols),
            v_inv: IntMatrix::identity(cols),
        }),
    };
    let mut factors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = w.smallest_in_block(t) else {
            break;
        };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let p = w.a[(t, t)].clone();
            let mut remainder = false;
            for i in t + 1..rows {
                if !w.a[(i, t)].is_zero() {
                    let q = w.a[(i, t)].div_floor(&p);
                    w.row_op(i, t, &q)?;
                    remainder |= !w.a[(i, t)].is_zero();
                }
            }
            for j in t + 1..cols {
                if !w.a[(t, j)].is_zero() {
                    let q = w.a[(t, j)].div_floor(&p);
                    w.col_op(j, t, &q)?;
                    remainder |= !w.a[(t, j)].is_zero();
                }
            }
            if remainder {
                let (i, j) = w.smallest_in_cross(t).expect("a remainder is nonzero");
                w.swap_rows(t, i);
                w.swap_cols(t, j);
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let bad_row = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !w.a[(i, j)].is_multiple_of(&p))
            });
            match bad_row {
                Some(i) => w.row_op(t, i, &-T::one())?,
                None => break,
            }
        }
        if w.a[(t, t)].is_negative() {
            w.negate_row(t)?;
        }
        factors.push(w.a[(t, t)].clone());
        t += 1;
    }
    Ok(SnfResult {
        rows,
        cols,
        invariant_factors: factors,
        transforms: w.tr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        let id = IntMatrix::<i64>::identity(4);
        assert_eq!(smith_normal_form(&id, false).unwrap().invariant_factors, vec![1; 4]);

        let m = IntMatrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(smith_normal_form(&m, false).unwrap().invariant_factors, vec![1, 6]);

        let m = IntMatrix::<BigInt>::from_i64_rows(&[&[1, 1, 1]]);
        let s = smith_normal_form(&m, true).unwrap();
        assert_eq!(s.invariant_factors, vec![BigInt::from(1)]);
        assert_eq!(s.cokernel_free_rank(), 2);

        let m = IntMatrix::<i64>::from_i64_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        assert_eq!(smith_normal_form(&m, false).unwrap().invariant_factors, vec![2, 6, 12]);

        let z = IntMatrix::<i64>::zeros(2, 3);
        assert!(smith_normal_form(&z, true).unwrap().invariant_factors.is_empty());
    }

    fn check_reconstruction(rows: Vec<Vec<i64>>) -> std::result::Result<(), TestCaseError> {
        let m = IntMatrix::<BigInt>::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
        )
        .unwrap();
        let s = smith_normal_form(&m, true).unwrap();
        let tr = s.transforms.as_ref().unwrap();
        let lhs = tr.u.mul(&m).unwrap().mul(&tr.v).unwrap();
        prop_assert_eq!(lhs, s.diagonal_matrix());
        prop_assert!(tr.u.determinant().unwrap().is_unit());
        prop_assert!(tr.v.determinant().unwrap().is_unit());
        prop_assert_eq!(tr.v.mul(&tr.v_inv).unwrap(), IntMatrix::identity(m.ncols()));
        for w in s.invariant_factors.windows(2) {
            prop_assert!(num_integer::Integer::is_multiple_of(&w[1], &w[0]));
        }
        prop_assert!(s.invariant_factors.iter().all(|d| d > &BigInt::from(0)));
        Ok(())
    }

    proptest! {
        #[test]
        fn transforms_reconstruct(
            rows in (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
                prop::collection::vec(prop::collection::vec(-9i64..=9, c), r)
            })
        ) {
            check_reconstruction(rows)?;
        }

        #[test]
        fn rank_agrees_with_determinant(
            rows in (1usize..5).prop_flat_map(|n| {
                prop::collection::vec(prop::collection::vec(-9i64..=9, n), n)
            })
        ) {
            let m = IntMatrix::<i64>::from_rows(rows).unwrap();
            let s = smith_normal_form(&m, false).unwrap();
            let det = m.determinant().unwrap();
            if det == 0 {
                prop_assert!(s.rank() < m.nrows());
            } else {
                prop_assert_eq!(s.invariant_factors.iter().product::<i64>(), det.abs());
            }
        }
    }
}
