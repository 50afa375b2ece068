use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

const CTX: &str = "integer matrix arithmetic";

/// Dense row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> IntMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Shape-explicit constructor, usable for `0 × n` matrices.
    pub fn from_flat(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::LengthMismatch {
                expected: rows * cols,
                found: data.len(),
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| T::lit(v)).collect())
                .collect(),
        )
        .expect("rows of equal length")
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMatrix<T>) -> Result<IntMatrix<T>> {
        if self.cols != other.rows {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = scalar::mul(a, b, CTX)?;
                        out[(i, j)] = scalar::add(&out[(i, j)], &prod, CTX)?;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        (0..self.rows)
            .map(|i| {
                self.row(i).iter().zip(v).try_fold(T::zero(), |acc, (a, b)| {
                    scalar::add(&acc, &scalar::mul(a, b, CTX)?, CTX)
                })
            })
            .collect()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<T> {
        if self.rows != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut sign = T::one();
        let mut prev = T::one();
        for k in 0..n {
            if a[(k, k)].is_zero() {
                let Some(swap) = (k + 1..n).find(|&i| !a[(i, k)].is_zero()) else {
                    return Ok(T::zero());
                };
                a.swap_rows(k, swap);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let lhs = scalar::mul(&a[(i, j)], &a[(k, k)], CTX)?;
                    let rhs = scalar::mul(&a[(i, k)], &a[(k, j)], CTX)?;
                    a[(i, j)] = scalar::sub(&lhs, &rhs, CTX)? / prev.clone();
                }
                a[(i, k)] = T::zero();
            }
            prev = a[(k, k)].clone();
        }
        Ok(if n == 0 {
            T::one()
        } else {
            scalar::mul(&sign, &a[(n - 1, n - 1)], CTX)?
        })
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// `row[dst] -= f · row[src]`.
    pub(crate) fn row_sub_mul(&mut self, dst: usize, src: usize, f: &T) -> Result<()> {
        if f.is_zero() {
            return Ok(());
        }
        for j in 0..self.cols {
            let s = self.data[src * self.cols + j].clone();
            if !s.is_zero() {
                let d = &mut self.data[dst * self.cols + j];
                *d = scalar::sub_mul(d, f, &s, CTX)?;
            }
        }
        Ok(())
    }

    /// `col[dst] -= f · col[src]`.
    pub(crate) fn col_sub_mul(&mut self, dst: usize, src: usize, f: &T) -> Result<()> {
        if f.is_zero() {
            return Ok(());
        }
        for i in 0..self.rows {
            let s = self.data[i * self.cols + src].clone();
            if !s.is_zero() {
                let d = &mut self.data[i * self.cols + dst];
                *d = scalar::sub_mul(d, f, &s, CTX)?;
            }
        }
        Ok(())
    }

    pub(crate) fn negate_row(&mut self, i: usize) -> Result<()> {
        for j in 0..self.cols {
            let v = &mut self.data[i * self.cols + j];
            *v = scalar::neg(v, CTX)?;
        }
        Ok(())
    }
}

impl<T> std::ops::Index<(usize, usize)> for IntMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> std::ops::IndexMut<(usize, usize)> for IntMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Debug> fmt::Debug for IntMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "IntMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|v| format!("{v:?}"))
                .collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    /// Cofactor expansion, independent of the Bareiss path.
    fn det_by_cofactors(m: &[Vec<i64>]) -> i64 {
        let n = m.len();
        if n == 0 {
            return 1;
        }
        (0..n)
            .map(|j| {
                let minor: Vec<Vec<i64>> = m[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, &v)| v).collect())
                    .collect();
                let s = if j % 2 == 0 { 1 } else { -1 };
                s * m[0][j] * det_by_cofactors(&minor)
            })
            .sum()
    }

    #[test]
    fn determinants() {
        let m = IntMatrix::<i64>::from_i64_rows(&[&[2, 0], &[0, 3]]);
        assert_eq!(m.determinant().unwrap(), 6);
        let m = IntMatrix::<i64>::from_i64_rows(&[&[0, 1, 2], &[1, 0, 3], &[4, -3, 8]]);
        assert_eq!(m.determinant().unwrap(), -2);
        let m = IntMatrix::<BigInt>::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(m.determinant().unwrap(), BigInt::from(0));
        assert_eq!(IntMatrix::<i64>::identity(0).determinant().unwrap(), 1);
    }

    #[test]
    fn determinant_matches_cofactors() {
        let mut state = 0x2545F4914F6CDD1Du64;
        let mut next = || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state % 19) as i64 - 9
        };
        for n in 1..6 {
            for _ in 0..20 {
                let rows: Vec<Vec<i64>> = (0..n).map(|_| (0..n).map(|_| next()).collect()).collect();
                let m = IntMatrix::<i64>::from_rows(rows.clone()).unwrap();
                assert_eq!(m.determinant().unwrap(), det_by_cofactors(&rows));
            }
        }
    }

    #[test]
    fn multiplication() {
        let a = IntMatrix::<i64>::from_i64_rows(&[&[1, 2], &[3, 4]]);
        let b = IntMatrix::<i64>::from_i64_rows(&[&[0, 1], &[1, 0]]);
        assert_eq!(a.mul(&b).unwrap(), IntMatrix::from_i64_rows(&[&[2, 1], &[4, 3]]));
        assert_eq!(a.mul_vec(&[1, 1]).unwrap(), vec![3, 7]);
        let big = IntMatrix::<i64>::from_i64_rows(&[&[i64::MAX]]);
        assert!(matches!(big.mul(&big), Err(Error::Overflow(_))));
    }
}
