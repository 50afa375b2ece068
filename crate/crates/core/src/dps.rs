//! The binary symplectic dual polar space `DSp(2g, 2)`.
//!
//! Points are Lagrangian subspaces of `F₂^{2g}`; lines are the triples of
//! Lagrangians through a common `(g−1)`-dimensional isotropic subspace.

use std::collections::{HashMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{pairing_unchecked, swap_halves, BitMatrix, BitVec};

/// Ordinal of a Lagrangian in the canonical (lexicographic) enumeration.
pub type PointIndex = usize;

/// Caps on enumeration sizes. The defaults admit genus 5 points and lines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_points: u128,
    pub max_lines: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_points: 100_000,
            max_lines: 1_000_000,
        }
    }
}

impl Limits {
    pub const UNBOUNDED: Limits = Limits {
        max_points: u128::MAX,
        max_lines: u128::MAX,
    };
}

/// `∏_{i=1}^{g} (2^i + 1)`.
pub fn point_count(g: usize) -> u128 {
    (1..=g as u32).map(|i| (1u128 << i) + 1).product()
}

/// `#points · (2^g − 1) / 3`; zero for `g = 0`.
pub fn line_count(g: usize) -> u128 {
    if g == 0 {
        return 0;
    }
    point_count(g) * ((1u128 << g) - 1) / 3
}

/// A Lagrangian subspace stored by its canonical rref basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lagrangian {
    genus: usize,
    basis: BitMatrix,
}

impl std::fmt::Debug for Lagrangian {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Lagrangian(g={}, {:?})", self.genus, self.basis)
    }
}

impl Lagrangian {
    /// Validates and canonicalizes a spanning set.
    pub fn from_rows(g: usize, rows: Vec<BitVec>) -> Result<Self> {
        let m = BitMatrix::from_rows(2 * g, rows)?;
        let rref = m.rref();
        if rref.rank != g {
            return Err(Error::NotLagrangian(format!(
                "dimension {} instead of {g}",
                rref.rank
            )));
        }
        let rows = rref.matrix.rows();
        for i in 0..rows.len() {
            for j in i + 1..rows.len() {
                if pairing_unchecked(&rows[i], &rows[j], g) {
                    return Err(Error::NotLagrangian(format!(
                        "rows {i} and {j} pair to 1"
                    )));
                }
            }
        }
        Ok(Self {
            genus: g,
            basis: rref.matrix,
        })
    }

    pub fn from_strs<S: AsRef<str>>(g: usize, rows: &[S]) -> Result<Self> {
        let m = BitMatrix::from_strs(2 * g, rows)?;
        Self::from_rows(g, m.into_rows())
    }

    /// Canonicalizes a spanning set already known to be isotropic of rank `g`.
    pub(crate) fn from_isotropic(g: usize, rows: Vec<BitVec>) -> Self {
        let basis = BitMatrix::from_rows(2 * g, rows)
            .expect("row lengths are 2g")
            .rref()
            .matrix;
        debug_assert_eq!(basis.nrows(), g);
        Self { genus: g, basis }
    }

    /// `span(b₁, …, b_g)`, the Lagrangian of the standard handlebody.
    pub fn standard(g: usize) -> Self {
        Self {
            genus: g,
            basis: BitMatrix::from_rows(2 * g, (0..g).map(|i| BitVec::unit(2 * g, g + i)).collect())
                .expect("row lengths are 2g"),
        }
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn basis(&self) -> &BitMatrix {
        &self.basis
    }

    pub fn rows(&self) -> &[BitVec] {
        self.basis.rows()
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.basis.to_strings()
    }

    /// Membership test; a Lagrangian is its own orthogonal complement.
    pub fn contains(&self, v: &BitVec) -> bool {
        self.rows()
            .iter()
            .all(|r| !pairing_unchecked(r, v, self.genus))
    }

    /// Canonical basis of `self ∩ other`.
    pub fn intersection(&self, other: &Lagrangian) -> BitMatrix {
        let g = self.genus;
        // Coefficient vectors x with Σ x_i p_i ∈ other.
        let pairing = BitMatrix::from_rows(
            g,
            other
                .rows()
                .iter()
                .map(|q| {
                    BitVec::from_indices(
                        g,
                        (0..g).filter(|&i| pairing_unchecked(&self.rows()[i], q, g)),
                    )
                })
                .collect(),
        )
        .expect("rows have length g");
        let combos = pairing.kernel();
        BitMatrix::from_rows(
            2 * g,
            combos
                .rows()
                .iter()
                .map(|x| self.basis.combine_rows(x))
                .collect(),
        )
        .expect("rows have length 2g")
        .rref()
        .matrix
    }

    pub fn is_isotropic_and_full(&self) -> bool {
        let rows = self.rows();
        rows.len() == self.genus
            && self.basis.rref().rank == self.genus
            && rows.iter().enumerate().all(|(i, u)| {
                rows[i + 1..]
                    .iter()
                    .all(|v| !pairing_unchecked(u, v, self.genus))
            })
    }
}

/// The unique third Lagrangian through `p ∩ q`.
pub fn third_point(p: &Lagrangian, q: &Lagrangian) -> Result<Lagrangian> {
    if p.genus != q.genus {
        return Err(Error::LengthMismatch {
            expected: 2 * p.genus,
            found: 2 * q.genus,
        });
    }
    let g = p.genus;
    let axis = p.intersection(q);
    if g == 0 || axis.nrows() + 1 != g {
        return Err(Error::NotCollinear {
            dim: axis.nrows(),
            expected: g.saturating_sub(1),
        });
    }
    let x = p
        .rows()
        .iter()
        .find(|r| !q.contains(r))
        .expect("p is not contained in q");
    let y = q
        .rows()
        .iter()
        .find(|r| !p.contains(r))
        .expect("q is not contained in p");
    let mut rows = axis.into_rows();
    rows.push(x.xor(y));
    Ok(Lagrangian::from_isotropic(g, rows))
}

/// A line: the three points through an isotropic `(g−1)`-space.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IsotropicLine {
    pub axis: BitMatrix,
    /// Sorted point indices.
    pub points: [PointIndex; 3],
}

/// All Lagrangians, in canonical lexicographic order of their serialized bases.
pub fn enumerate_lagrangians(g: usize, limits: &Limits) -> Result<Vec<Lagrangian>> {
    let needed = point_count(g);
    if needed > limits.max_points {
        return Err(Error::ResourceLimit {
            what: "Lagrangian enumeration",
            needed,
            cap: limits.max_points,
        });
    }
    if 2 * g > 62 {
        return Err(Error::InvalidGenus {
            genus: g,
            reason: "enumeration supports 2g <= 62",
        });
    }
    if g == 0 {
        return Ok(vec![Lagrangian::standard(0)]);
    }
    let n = 2 * g;
    let pivot_sets = combinations(n, g);
    let mut found: Vec<Vec<u64>> = pivot_sets
        .par_iter()
        .flat_map_iter(|pivots| isotropic_rrefs_with_pivots(g, pivots))
        .collect();
    // Lexicographic order of the '0'/'1' strings: coordinate 0 most significant.
    found.par_sort_unstable_by_key(|rows| rows.iter().map(|w| w.reverse_bits()).collect::<Vec<_>>());
    let points: Vec<Lagrangian> = found
        .into_iter()
        .map(|rows| Lagrangian {
            genus: g,
            basis: BitMatrix::from_rows(n, rows.into_iter().map(|w| BitVec::from_word(n, w)).collect())
                .expect("row lengths are 2g"),
        })
        .collect();
    if points.len() as u128 != needed {
        return Err(Error::InternalInvariant(format!(
            "enumerated {} Lagrangians, expected {needed}",
            points.len()
        )));
    }
    Ok(points)
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n - (k - cur.len()) {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

#[inline]
fn pair_words(u: u64, v: u64, g: usize) -> bool {
    let lo = (1u64 << g) - 1;
    let swapped = ((v >> g) & lo) | ((v & lo) << g);
    (u & swapped).count_ones() & 1 == 1
}

/// Isotropic rref bases whose pivot columns are exactly `pivots`, built
/// row by row and pruned as soon as a row pairs nontrivially with an earlier one.
fn isotropic_rrefs_with_pivots(g: usize, pivots: &[usize]) -> Vec<Vec<u64>> {
    let n = 2 * g;
    let pivot_mask: u64 = pivots.iter().fold(0, |m, &p| m | (1 << p));
    let full: u64 = (1u64 << n) - 1;
    let free: Vec<u64> = pivots
        .iter()
        .map(|&p| {
            let right = full & !((1u64 << (p + 1)) - 1);
            right & !pivot_mask
        })
        .collect();

    let mut out = Vec::new();
    let mut rows = Vec::with_capacity(g);
    fn extend(
        g: usize,
        pivots: &[usize],
        free: &[u64],
        rows: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        let i = rows.len();
        if i == g {
            out.push(rows.clone());
            return;
        }
        let mask = free[i];
        let mut sub = 0u64;
        loop {
            let row = (1u64 << pivots[i]) | sub;
            if rows.iter().all(|&r| !pair_words(r, row, g)) {
                rows.push(row);
                extend(g, pivots, free, rows, out);
                rows.pop();
            }
            if sub == mask {
                break;
            }
            sub = sub.wrapping_sub(mask) & mask;
        }
    }
    extend(g, pivots, &free, &mut rows, &mut out);
    out
}

/// The points of `DSp(2g, 2)` with a lookup from canonical basis to index.
#[derive(Debug, Clone)]
pub struct DualPolarSpace {
    genus: usize,
    points: Vec<Lagrangian>,
    index: HashMap<BitMatrix, PointIndex>,
}

impl DualPolarSpace {
    pub fn new(g: usize, limits: &Limits) -> Result<Self> {
        let points = enumerate_lagrangians(g, limits)?;
        let index = points
            .iter()
            .enumerate()
            .map(|(i, p)| (p.basis.clone(), i))
            .collect();
        Ok(Self {
            genus: g,
            points,
            index,
        })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn points(&self) -> &[Lagrangian] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: PointIndex) -> Result<&Lagrangian> {
        self.points.get(i).ok_or(Error::PointOutOfRange {
            index: i,
            len: self.points.len(),
        })
    }

    pub fn index_of(&self, l: &Lagrangian) -> Option<PointIndex> {
        if l.genus != self.genus {
            return None;
        }
        self.index.get(&l.basis).copied()
    }

    /// One line per isotropic `(g−1)`-space, sorted by axis.
    pub fn enumerate_lines(&self, limits: &Limits) -> Result<Vec<IsotropicLine>> {
        let g = self.genus;
        if g == 0 {
            return Err(Error::InvalidGenus {
                genus: 0,
                reason: "lines need g >= 1",
            });
        }
        let needed = line_count(g);
        if needed > limits.max_lines {
            return Err(Error::ResourceLimit {
                what: "line enumeration",
                needed,
                cap: limits.max_lines,
            });
        }
        let mut lines: Vec<IsotropicLine> = (0..self.points.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let p = &self.points[i];
                (1u64..1 << g).filter_map(move |f| {
                    let (axis, others) = lines_through_hyperplane(p, f);
                    let j = self.index[others[0].basis()];
                    let k = self.index[others[1].basis()];
                    // Emit each line once, from its smallest point.
                    (i < j && i < k).then(|| {
                        let mut pts = [i, j, k];
                        pts.sort_unstable();
                        IsotropicLine { axis, points: pts }
                    })
                })
            })
            .collect();
        lines.par_sort_unstable();
        if lines.len() as u128 != needed {
            return Err(Error::InternalInvariant(format!(
                "enumerated {} lines, expected {needed}",
                lines.len()
            )));
        }
        Ok(lines)
    }
}

/// For the hyperplane of `p` cut out by the functional `f` on its basis
/// coordinates, returns the hyperplane's canonical basis and the two other
/// Lagrangians containing it.
fn lines_through_hyperplane(p: &Lagrangian, f: u64) -> (BitMatrix, [Lagrangian; 2]) {
    let g = p.genus;
    let rows = p.rows();
    let j = f.trailing_zeros() as usize;
    let hyper: Vec<BitVec> = (0..g)
        .filter(|&i| i != j)
        .map(|i| {
            if f >> i & 1 == 1 {
                rows[i].xor(&rows[j])
            } else {
                rows[i].clone()
            }
        })
        .collect();
    let axis = BitMatrix::from_rows(2 * g, hyper)
        .expect("row lengths are 2g")
        .rref()
        .matrix;
    // axis^⊥ = kernel of the swapped rows; pick any vector outside p.
    let perp = BitMatrix::from_rows(
        2 * g,
        axis.rows().iter().map(|s| swap_halves(s, g)).collect(),
    )
    .expect("row lengths are 2g")
    .kernel();
    let y = perp
        .rows()
        .iter()
        .find(|v| !p.contains(v))
        .expect("axis^⊥ strictly contains p")
        .clone();
    let x = &rows[j];
    let mut first = axis.rows().to_vec();
    first.push(y.clone());
    let mut second = axis.rows().to_vec();
    second.push(y.xor(x));
    (
        axis,
        [
            Lagrangian::from_isotropic(g, first),
            Lagrangian::from_isotropic(g, second),
        ],
    )
}

/// Points, lines and incidence of `DSp(2g, 2)` built together.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub space: DualPolarSpace,
    pub lines: Vec<IsotropicLine>,
    pub incidence: Incidence,
}

impl Geometry {
    /// For `g = 0` the single point lies on no line.
    pub fn new(g: usize, limits: &Limits) -> Result<Self> {
        let space = DualPolarSpace::new(g, limits)?;
        let lines = if g == 0 {
            Vec::new()
        } else {
            space.enumerate_lines(limits)?
        };
        let incidence = Incidence::new(space.len(), &lines);
        Ok(Self {
            space,
            lines,
            incidence,
        })
    }

    pub fn genus(&self) -> usize {
        self.space.genus()
    }

    pub fn closure(&self, seed: &[PointIndex]) -> Result<Closure> {
        geometric_closure(seed, &self.incidence)
    }
}

/// Point-to-line incidence in compressed form.
#[derive(Debug, Clone)]
pub struct Incidence {
    lines: Vec<[u32; 3]>,
    offsets: Vec<usize>,
    through: Vec<u32>,
}

impl Incidence {
    pub fn new(num_points: usize, lines: &[IsotropicLine]) -> Self {
        let mut degree = vec![0usize; num_points + 1];
        for l in lines {
            for &p in &l.points {
                degree[p + 1] += 1;
            }
        }
        for i in 0..num_points {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut through = vec![0u32; offsets[num_points]];
        for (li, l) in lines.iter().enumerate() {
            for &p in &l.points {
                through[fill[p]] = li as u32;
                fill[p] += 1;
            }
        }
        Self {
            lines: lines
                .iter()
                .map(|l| l.points.map(|p| p as u32))
                .collect(),
            offsets,
            through,
        }
    }

    pub fn num_points(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn num_lines(&self) -> usize {
        self.lines.len()
    }

    pub fn line(&self, i: usize) -> [usize; 3] {
        self.lines[i].map(|p| p as usize)
    }

    pub fn lines_through(&self, p: PointIndex) -> impl Iterator<Item = usize> + '_ {
        self.through[self.offsets[p]..self.offsets[p + 1]]
            .iter()
            .map(|&l| l as usize)
    }

    pub fn degree(&self, p: PointIndex) -> usize {
        self.offsets[p + 1] - self.offsets[p]
    }
}

/// One completion step of a closure: `point` was added because `line`
/// already contained `from`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosureStep {
    pub point: PointIndex,
    pub line: usize,
    pub from: [PointIndex; 2],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Closure {
    members: Vec<bool>,
    /// Deduplicated seed points, sorted.
    pub seed: Vec<PointIndex>,
    /// Added points in the order they were found.
    pub steps: Vec<ClosureStep>,
}

impl Closure {
    pub fn contains(&self, p: PointIndex) -> bool {
        self.members.get(p).copied().unwrap_or(false)
    }

    pub fn len(&self) -> usize {
        self.seed.len() + self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_everything(&self) -> bool {
        self.members.iter().all(|&b| b)
    }

    /// Members in increasing index order.
    pub fn points(&self) -> Vec<PointIndex> {
        self.members
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Smallest superset of `seed` containing the third point of every line
/// that meets it twice. Work-queue order, so the step list is deterministic.
pub fn geometric_closure(seed: &[PointIndex], incidence: &Incidence) -> Result<Closure> {
    let n = incidence.num_points();
    let mut members = vec![false; n];
    let mut seed_sorted = Vec::with_capacity(seed.len());
    for &p in seed {
        if p >= n {
            return Err(Error::PointOutOfRange { index: p, len: n });
        }
        if !members[p] {
            members[p] = true;
            seed_sorted.push(p);
        }
    }
    seed_sorted.sort_unstable();
    let mut queue: VecDeque<PointIndex> = seed_sorted.iter().copied().collect();
    let mut steps = Vec::new();
    while let Some(p) = queue.pop_front() {
        for li in incidence.lines_through(p) {
            let pts = incidence.line(li);
            let outside: Vec<PointIndex> = pts.iter().copied().filter(|&q| !members[q]).collect();
            if let [r] = outside[..] {
                let from: Vec<PointIndex> = pts.iter().copied().filter(|&q| q != r).collect();
                members[r] = true;
                steps.push(ClosureStep {
                    point: r,
                    line: li,
                    from: [from[0], from[1]],
                });
                queue.push_back(r);
            }
        }
    }
    Ok(Closure {
        members,
        seed: seed_sorted,
        steps,
    })
}
