//! Linear algebra over the two-element field on packed bit vectors.
//!
//! Coordinate `i` lives in bit `i % 64` of word `i / 64`. Bits at or beyond
//! `len` are always zero, so equality and hashing can work word-wise.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: SmallVec<[u64; 1]>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: SmallVec::from_elem(0, words_for(len)),
        }
    }

    /// Unit vector `e_i`.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    /// Builds a vector from the low `len` bits of `bits` (`len <= 64`).
    pub fn from_word(len: usize, bits: u64) -> Self {
        assert!(len <= WORD, "from_word supports at most 64 coordinates");
        let mut v = Self::zeros(len);
        if len > 0 {
            v.words[0] = bits & tail_mask(len);
        }
        v
    }

    pub fn from_indices(len: usize, ones: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in ones {
            v.set(i, true);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The first word; the whole vector when `len <= 64`.
    pub fn low_word(&self) -> u64 {
        self.words.first().copied().unwrap_or(0)
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    #[inline]
    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(other.words.iter()) {
            *a ^= *b;
        }
    }

    pub fn xor(&self, other: &BitVec) -> BitVec {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set coordinate.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(k, w)| k * WORD + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let t = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(k * WORD + t)
                }
            })
        })
    }

    /// Standard dot product mod 2.
    pub fn dot(&self, other: &BitVec) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(other.words.iter())
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len)
            .map(|i| if self.get(i) { '1' } else { '0' })
            .collect()
    }
}

#[inline]
fn tail_mask(len: usize) -> u64 {
    match len % WORD {
        0 => u64::MAX,
        r => (1u64 << r) - 1,
    }
}

/// Lexicographic order of the `'0'/'1'` serialization.
impl Ord for BitVec {
    fn cmp(&self, other: &Self) -> Ordering {
        for (a, b) in self.words.iter().zip(other.words.iter()) {
            let diff = a ^ b;
            if diff != 0 {
                let bit = diff & diff.wrapping_neg();
                return if a & bit != 0 {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
            }
        }
        self.len.cmp(&other.len)
    }
}

impl PartialOrd for BitVec {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_bit_string())
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVec({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid bit string: {0:?}")]
pub struct ParseBitsError(pub String);

impl FromStr for BitVec {
    type Err = ParseBitsError;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let mut v = BitVec::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                _ => return Err(ParseBitsError(s.to_string())),
            }
        }
        Ok(v)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

/// Result of [`BitMatrix::rref`]: only the nonzero rows are kept.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: BitMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            cols,
            rows: vec![BitVec::zeros(cols); rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            cols: n,
            rows: (0..n).map(|i| BitVec::unit(n, i)).collect(),
        }
    }

    pub fn empty(cols: usize) -> Self {
        Self {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Ok(Self { cols, rows })
    }

    /// Parses rows of `'0'/'1'` strings, top row first.
    pub fn from_strs<S: AsRef<str>>(cols: usize, rows: &[S]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|s| {
                s.as_ref().parse::<BitVec>().map_err(|_| Error::LengthMismatch {
                    expected: cols,
                    found: s.as_ref().len(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(cols, rows)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[BitVec] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVec {
        &self.rows[i]
    }

    pub fn into_rows(self) -> Vec<BitVec> {
        self.rows
    }

    pub fn push_row(&mut self, row: BitVec) -> Result<()> {
        if row.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: row.len(),
            });
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.rows[c].set(r, true);
            }
        }
        t
    }

    /// `self · v` treating `v` as a column vector.
    pub fn mul_vec(&self, v: &BitVec) -> Result<BitVec> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok(BitVec::from_indices(
            self.rows.len(),
            self.rows
                .iter()
                .enumerate()
                .filter(|(_, r)| r.dot(v))
                .map(|(i, _)| i),
        ))
    }

    /// `Σ coeffs_i · row_i`.
    pub fn combine_rows(&self, coeffs: &BitVec) -> BitVec {
        let mut acc = BitVec::zeros(self.cols);
        for i in coeffs.ones() {
            acc.xor_assign(&self.rows[i]);
        }
        acc
    }

    /// Reduced row echelon form with lowest-index pivoting.
    pub fn rref(&self) -> Rref {
        let mut rows = self.rows.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == rows.len() {
                break;
            }
            let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, found);
            let pivot = rows[rank].clone();
            for (r, row) in rows.iter_mut().enumerate() {
                if r != rank && row.get(col) {
                    row.xor_assign(&pivot);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        Rref {
            matrix: BitMatrix {
                cols: self.cols,
                rows,
            },
            rank,
            pivots,
        }
    }

    /// Rank by forward elimination. Rows below the pivot are updated in
    /// parallel for tall matrices; the result does not depend on scheduling.
    pub fn rank(&self) -> usize {
        let mut rows = self.rows.clone();
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == rows.len() {
                break;
            }
            let Some(found) = (rank..rows.len()).find(|&r| rows[r].get(col)) else {
                continue;
            };
            rows.swap(rank, found);
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            let clear = |row: &mut BitVec| {
                if row.get(col) {
                    row.xor_assign(pivot);
                }
            };
            if tail.len() > 4096 {
                tail.par_iter_mut().for_each(clear);
            } else {
                tail.iter_mut().for_each(clear);
            }
            rank += 1;
        }
        rank
    }

    /// Basis of `{v : self · vᵀ = 0}` in canonical rref form.
    pub fn kernel(&self) -> BitMatrix {
        let Rref {
            matrix, pivots, ..
        } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = BitVec::unit(self.cols, free);
            for (row, &p) in matrix.rows.iter().zip(pivots.iter()) {
                if row.get(free) {
                    v.set(p, true);
                }
            }
            basis.push(v);
        }
        BitMatrix {
            cols: self.cols,
            rows: basis,
        }
        .rref()
        .matrix
    }

    /// Finds `x` with `Σ x_i · row_i = target`, if one exists.
    pub fn solve_left(&self, target: &BitVec) -> Result<Option<BitVec>> {
        if target.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: target.len(),
            });
        }
        let n = self.rows.len();
        // Track which original rows make up each working row.
        let mut work: Vec<(BitVec, BitVec)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), BitVec::unit(n, i)))
            .collect();
        let mut residual = target.clone();
        let mut coeffs = BitVec::zeros(n);
        let mut rank = 0;
        for col in 0..self.cols {
            let Some(found) = (rank..work.len()).find(|&r| work[r].0.get(col)) else {
                continue;
            };
            work.swap(rank, found);
            let (pivot, combo) = work[rank].clone();
            for row in work.iter_mut().skip(rank + 1) {
                if row.0.get(col) {
                    row.0.xor_assign(&pivot);
                    row.1.xor_assign(&combo);
                }
            }
            if residual.get(col) {
                residual.xor_assign(&pivot);
                coeffs.xor_assign(&combo);
            }
            rank += 1;
        }
        Ok(residual.is_zero().then_some(coeffs))
    }

    pub fn row_space_contains(&self, v: &BitVec) -> Result<bool> {
        Ok(self.solve_left(v)?.is_some())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.rows.iter().map(BitVec::to_bit_string).collect()
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_strings()).finish()
    }
}

/// Swaps the `a` and `b` halves of a length-`2g` vector, so that
/// `pairing(u, v) = u · swap_halves(v)`.
pub fn swap_halves(v: &BitVec, g: usize) -> BitVec {
    debug_assert_eq!(v.len(), 2 * g);
    if g == 0 {
        return BitVec::zeros(0);
    }
    if 2 * g <= WORD {
        let w = v.low_word();
        let lo = (1u64 << g) - 1;
        return BitVec::from_word(2 * g, ((w >> g) & lo) | ((w & lo) << g));
    }
    let mut out = BitVec::zeros(2 * g);
    for i in v.ones() {
        out.set(if i < g { i + g } else { i - g }, true);
    }
    out
}

/// The standard symplectic pairing on `F₂^{2g}` with basis
/// `a₁..a_g, b₁..b_g` and `⟨a_i, b_j⟩ = δ_ij`.
pub fn symplectic_pairing(u: &BitVec, v: &BitVec, g: usize) -> Result<bool> {
    for w in [u, v] {
        if w.len() != 2 * g {
            return Err(Error::LengthMismatch {
                expected: 2 * g,
                found: w.len(),
            });
        }
    }
    Ok(pairing_unchecked(u, v, g))
}

#[inline]
pub(crate) fn pairing_unchecked(u: &BitVec, v: &BitVec, g: usize) -> bool {
    if 2 * g <= WORD {
        let (u, v) = (u.low_word(), v.low_word());
        if g == 0 {
            return false;
        }
        let lo = (1u64 << g) - 1;
        let swapped = ((v >> g) & lo) | ((v & lo) << g);
        (u & swapped).count_ones() & 1 == 1
    } else {
        u.dot(&swap_halves(v, g))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(cols: usize, rows: &[&str]) -> BitMatrix {
        BitMatrix::from_strs(cols, rows).unwrap()
    }

    #[test]
    fn rref_zero_matrix() {
        let r = BitMatrix::zeros(2, 3).rref();
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
        assert_eq!(r.matrix.nrows(), 0);
    }

    #[test]
    fn rref_identity() {
        let id = BitMatrix::identity(2);
        let r = id.rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.matrix, id);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_dependent_rows() {
        let r = m(3, &["110", "011", "101"]).rref();
        assert_eq!(r.rank, 2);
        assert_eq!(r.matrix.to_strings(), vec!["101", "011"]);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(BitMatrix::identity(3).kernel().nrows(), 0);
        let k = m(4, &["1111"]).kernel();
        assert_eq!(k.nrows(), 3);
        let k = m(4, &["1100", "0011"]).kernel();
        assert_eq!(k.to_strings(), vec!["1100", "0011"]);
    }

    #[test]
    fn pairing_examples() {
        let a1 = BitVec::unit(2, 0);
        let b1 = BitVec::unit(2, 1);
        assert!(symplectic_pairing(&a1, &b1, 1).unwrap());
        let a1 = BitVec::unit(4, 0);
        let a2 = BitVec::unit(4, 1);
        assert!(!symplectic_pairing(&a1, &a2, 2).unwrap());
        // a1 + b2 against a2 + b1
        let u: BitVec = "1001".parse().unwrap();
        let v: BitVec = "0110".parse().unwrap();
        assert!(!symplectic_pairing(&u, &v, 2).unwrap());
        assert_eq!(
            symplectic_pairing(&u, &BitVec::zeros(3), 2),
            Err(Error::LengthMismatch {
                expected: 4,
                found: 3
            })
        );
    }

    #[test]
    fn pairing_wide_matches_narrow() {
        // g = 40 exercises the multi-word path.
        let g = 40;
        let u = BitVec::from_indices(2 * g, [0, 3, 45, 79]);
        let v = BitVec::from_indices(2 * g, [40, 5, 43, 39]);
        let brute = (0..g)
            .filter(|&i| (u.get(i) && v.get(g + i)) ^ (u.get(g + i) && v.get(i)))
            .count()
            % 2
            == 1;
        assert_eq!(symplectic_pairing(&u, &v, g).unwrap(), brute);
    }

    #[test]
    fn solve_left_finds_combination() {
        let a = m(4, &["1100", "0110", "0011"]);
        let target: BitVec = "1001".parse().unwrap();
        let x = a.solve_left(&target).unwrap().unwrap();
        assert_eq!(a.combine_rows(&x), target);
        assert_eq!(a.solve_left(&"1000".parse().unwrap()).unwrap(), None);
    }

    #[test]
    fn lex_order_matches_strings() {
        let mut vs: Vec<BitVec> = ["0110", "1000", "0001", "1110", "0000"]
            .iter()
            .map(|s| s.parse().unwrap())
            .collect();
        vs.sort();
        let strs: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        let mut expected = strs.clone();
        expected.sort();
        assert_eq!(strs, expected);
    }

    fn arb_matrix() -> impl Strategy<Value = BitMatrix> {
        (1usize..7, 1usize..70).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), c), r).prop_map(
                move |rows| {
                    let rows = rows
                        .into_iter()
                        .map(|bits| {
                            BitVec::from_indices(
                                c,
                                bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
                            )
                        })
                        .collect();
                    BitMatrix::from_rows(c, rows).unwrap()
                },
            )
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(mat in arb_matrix()) {
            let r = mat.rref();
            prop_assert_eq!(r.rank, mat.rank());
            let k = mat.kernel();
            prop_assert_eq!(r.rank + k.nrows(), mat.ncols());
            for v in k.rows() {
                prop_assert!(mat.mul_vec(v).unwrap().is_zero());
            }
        }

        #[test]
        fn rref_is_canonical(mat in arb_matrix()) {
            let r = mat.rref();
            prop_assert_eq!(&r.matrix.rref().matrix, &r.matrix);
            for row in mat.rows() {
                prop_assert!(r.matrix.row_space_contains(row).unwrap());
            }
            // Shuffled, re-combined rows span the same space.
            let mut other = mat.rows().to_vec();
            other.reverse();
            if other.len() > 1 {
                let first = other[0].clone();
                other[1].xor_assign(&first);
            }
            let other = BitMatrix::from_rows(mat.ncols(), other).unwrap();
            prop_assert_eq!(other.rref().matrix, r.matrix);
        }

        #[test]
        fn pairing_alternating_bilinear(g in 1usize..8, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
            let u = BitVec::from_word(2 * g, a);
            let v = BitVec::from_word(2 * g, b);
            let w = BitVec::from_word(2 * g, c);
            prop_assert!(!symplectic_pairing(&u, &u, g).unwrap());
            let lhs = symplectic_pairing(&u.xor(&v), &w, g).unwrap();
            let rhs = symplectic_pairing(&u, &w, g).unwrap() ^ symplectic_pairing(&v, &w, g).unwrap();
            prop_assert_eq!(lhs, rhs);
            prop_assert_eq!(symplectic_pairing(&u, &v, g).unwrap(), symplectic_pairing(&v, &u, g).unwrap());
        }
    }
}
