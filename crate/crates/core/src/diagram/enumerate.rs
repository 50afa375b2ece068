use rayon::prelude::*;

use super::special::{is_irreducible, is_special};
use super::{CrossinglessDiagram, MAX_GENUS};

/// Every noncrossing partition of every subset of `1..=g`, sorted in the
/// canonical diagram order.
///
/// Punctures are scanned left to right; each is left uncircled, opens a new
/// block, or joins an open block. Joining a block closes every block opened
/// after it, which is exactly what keeps the partition noncrossing.
pub fn enumerate_almost_special(g: usize) -> Vec<CrossinglessDiagram> {
    assert!(g <= MAX_GENUS, "genus {g} exceeds {MAX_GENUS}");
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    let mut blocks: Vec<u64> = Vec::new();
    walk(g, 0, &mut blocks, &mut stack, &mut out);
    out.par_sort_unstable();
    out
}

fn walk(
    g: usize,
    next: usize,
    blocks: &mut Vec<u64>,
    open: &mut Vec<usize>,
    out: &mut Vec<CrossinglessDiagram>,
) {
    if next == g {
        out.push(CrossinglessDiagram::from_parts_unchecked(g, blocks.clone()));
        return;
    }
    let bit = 1u64 << next;

    walk(g, next + 1, blocks, open, out);

    blocks.push(bit);
    open.push(blocks.len() - 1);
    walk(g, next + 1, blocks, open, out);
    open.pop();
    blocks.pop();

    for depth in 0..open.len() {
        let saved: Vec<usize> = open.drain(depth + 1..).collect();
        let target = open[depth];
        blocks[target] |= bit;
        walk(g, next + 1, blocks, open, out);
        blocks[target] &= !bit;
        open.extend(saved);
    }
}

/// The special diagrams, in canonical order.
pub fn enumerate_special(g: usize) -> Vec<CrossinglessDiagram> {
    enumerate_almost_special(g)
        .into_par_iter()
        .filter(is_special)
        .collect()
}

/// Irreducible special diagrams of genus `g`.
pub fn irreducible_special(g: usize) -> Vec<CrossinglessDiagram> {
    enumerate_almost_special(g)
        .into_par_iter()
        .filter(|d| is_irreducible(d) && is_special(d))
        .collect()
}
