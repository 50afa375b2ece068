//! Sparse integer elimination on unit pivots.
//!
//! Repeatedly picks a `±1` entry in the sparsest column that has one and
//! clears that column from every other active row. Each such step splits
//! off a `1` in the Smith form, so what remains (rows with no unit entries
//! left) is a much smaller residual block for the dense algorithm.

use crate::error::Result;
use crate::scalar::{self, Scalar};

const CTX: &str = "sparse elimination";

/// Sorted `(column, value)` pairs with no explicit zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseRow<T> {
    pub entries: Vec<(u32, T)>,
}

impl<T: Scalar> SparseRow<T> {
    pub fn new(mut entries: Vec<(u32, T)>) -> Self {
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(u32, T)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv = lv.clone() + v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        Self { entries: merged }
    }

    pub fn get(&self, col: u32) -> Option<&T> {
        self.entries
            .binary_search_by_key(&col, |e| e.0)
            .ok()
            .map(|i| &self.entries[i].1)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `self - f · other`.
    fn sub_mul(&self, f: &T, other: &SparseRow<T>) -> Result<SparseRow<T>> {
        let (a, b) = (&self.entries, &other.entries);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() || j < b.len() {
            let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
            let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
            if take_a {
                out.push(a[i].clone());
                i += 1;
            } else if take_b {
                out.push((b[j].0, scalar::neg(&scalar::mul(f, &b[j].1, CTX)?, CTX)?));
                j += 1;
            } else {
                let v = scalar::sub_mul(&a[i].1, f, &b[j].1, CTX)?;
                if !v.is_zero() {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        Ok(SparseRow { entries: out })
    }
}

/// A row used as a unit pivot, kept with its entries at the time it was chosen.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PivotRow<T> {
    pub col: u32,
    /// `±1`.
    pub sign: T,
    pub row: SparseRow<T>,
}

#[derive(Debug, Clone)]
pub struct Elimination<T> {
    pub cols: usize,
    /// In the order chosen. A pivot row has no entries in earlier pivot columns.
    pub pivots: Vec<PivotRow<T>>,
    /// Remaining nonzero rows; they have no entries in pivot columns.
    pub residual: Vec<SparseRow<T>>,
}

impl<T: Scalar> Elimination<T> {
    pub fn is_pivot_col(&self) -> Vec<bool> {
        let mut mark = vec![false; self.cols];
        for p in &self.pivots {
            mark[p.col as usize] = true;
        }
        mark
    }
}

pub fn eliminate_unit_pivots<T: Scalar>(rows: Vec<SparseRow<T>>, cols: usize) -> Result<Elimination<T>> {
    let mut active: Vec<Option<SparseRow<T>>> = rows
        .into_iter()
        .map(|r| (!r.is_empty()).then_some(r))
        .collect();
    // Column -> rows that may hold an entry there (stale ids are tolerated).
    let mut col_rows: Vec<Vec<u32>> = vec![Vec::new(); cols];
    let mut col_count = vec![0usize; cols];
    for (ri, r) in active.iter().enumerate() {
        if let Some(r) = r {
            for (c, _) in &r.entries {
                col_rows[*c as usize].push(ri as u32);
                col_count[*c as usize] += 1;
            }
        }
    }
    let mut pivots = Vec::new();
    let mut by_count: Vec<usize> = Vec::with_capacity(cols);
    loop {
        by_count.clear();
        by_count.extend((0..cols).filter(|&c| col_count[c] > 0));
        by_count.sort_by_key(|&c| (col_count[c], c));
        let mut choice = None;
        for &c in &by_count {
            let holders = live_rows(&mut col_rows[c], &active, c as u32);
            let best = holders
                .iter()
                .filter(|&&ri| active[ri as usize].as_ref().unwrap().get(c as u32).unwrap().is_unit())
                .min_by_key(|&&ri| (active[ri as usize].as_ref().unwrap().len(), ri));
            if let Some(&ri) = best {
                choice = Some((c as u32, ri as usize));
                break;
            }
        }
        let Some((col, pr)) = choice else {
            break;
        };
        let pivot = active[pr].take().expect("pivot row is active");
        for (c, _) in &pivot.entries {
            col_count[*c as usize] -= 1;
        }
        let sign = pivot.get(col).expect("pivot entry").clone();
        let holders = live_rows(&mut col_rows[col as usize], &active, col);
        for ri in holders {
            let ri = ri as usize;
            let row = active[ri].take().expect("holder is active");
            let f = scalar::mul(row.get(col).expect("holder has entry"), &sign, CTX)?;
            let updated = row.sub_mul(&f, &pivot)?;
            for (c, _) in &row.entries {
                col_count[*c as usize] -= 1;
            }
            for (c, _) in &updated.entries {
                col_count[*c as usize] += 1;
                if row.get(*c).is_none() {
                    col_rows[*c as usize].push(ri as u32);
                }
            }
            if !updated.is_empty() {
                active[ri] = Some(updated);
            }
        }
        debug_assert_eq!(col_count[col as usize], 0);
        col_rows[col as usize] = Vec::new();
        pivots.push(PivotRow {
            col,
            sign,
            row: pivot,
        });
    }
    Ok(Elimination {
        cols,
        pivots,
        residual: active.into_iter().flatten().collect(),
    })
}

/// Deduplicates and prunes a column's holder list in place.
fn live_rows<T: Scalar>(holders: &mut Vec<u32>, active: &[Option<SparseRow<T>>], col: u32) -> Vec<u32> {
    holders.sort_unstable();
    holders.dedup();
    holders.retain(|&ri| {
        active[ri as usize]
            .as_ref()
            .is_some_and(|r| r.get(col).is_some())
    });
    holders.clone()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(entries: &[(u32, i64)]) -> SparseRow<i64> {
        SparseRow::new(entries.to_vec())
    }

    #[test]
    fn sparse_row_normalizes() {
        let r = row(&[(3, 1), (1, 2), (3, -1), (0, 0)]);
        assert_eq!(r.entries, vec![(1, 2)]);
    }

    #[test]
    fn triangle_relation() {
        let e = eliminate_unit_pivots(vec![row(&[(0, 1), (1, 1), (2, 1)])], 3).unwrap();
        assert_eq!(e.pivots.len(), 1);
        assert!(e.residual.is_empty());
    }

    #[test]
    fn residual_keeps_non_unit_rows() {
        // [[2, 0], [0, 3]] has no unit pivots at all.
        let e = eliminate_unit_pivots(vec![row(&[(0, 2)]), row(&[(1, 3)])], 2).unwrap();
        assert!(e.pivots.is_empty());
        assert_eq!(e.residual.len(), 2);

        // x + y, x - y: one unit pivot, residual 2.
        let e = eliminate_unit_pivots(vec![row(&[(0, 1), (1, 1)]), row(&[(0, 1), (1, -1)])], 2).unwrap();
        assert_eq!(e.pivots.len(), 1);
        assert_eq!(e.residual.len(), 1);
        assert_eq!(e.residual[0].len(), 1);
        assert_eq!(e.residual[0].entries[0].1.abs(), 2);
    }

    #[test]
    fn dependent_rows_vanish() {
        let rows = vec![
            row(&[(0, 1), (1, 1)]),
            row(&[(1, 1), (2, 1)]),
            row(&[(0, 1), (2, -1)]),
        ];
        let e = eliminate_unit_pivots(rows, 3).unwrap();
        assert_eq!(e.pivots.len(), 2);
        assert!(e.residual.is_empty());
    }
}
