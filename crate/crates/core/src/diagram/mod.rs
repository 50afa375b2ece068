//! Minimal crossingless link diagrams in the thickened punctured disk.
//!
//! A diagram is a noncrossing partition of a subset of the punctures
//! `1..=g`: each block is the set of punctures circled by one link
//! component. Blocks are pairwise disjoint (each compressing disk is met at
//! most once) and pairwise noncrossing (the link lies in a single slice).

mod enumerate;
mod special;

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

pub use enumerate::{enumerate_almost_special, enumerate_special, irreducible_special};
pub use special::{
    is_irreducible, is_special, reduce, wrap_constructions, ReductionRecord,
};

/// Largest genus a diagram can carry; punctures are bits of a `u64`.
pub const MAX_GENUS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagramError {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("puncture {puncture} is circled more than once")]
    MinimalityViolation { puncture: usize },
    #[error("blocks {first} and {second} cross")]
    NoncrossingViolation { first: String, second: String },
    #[error("puncture {puncture} out of range 1..={genus}")]
    PunctureOutOfRange { puncture: usize, genus: usize },
    #[error("genus {0} exceeds the supported maximum of {MAX_GENUS}")]
    GenusTooLarge(usize),
}

/// A genus together with a noncrossing partition of a subset of its
/// punctures. Blocks are bitmasks (bit `i − 1` is puncture `i`), sorted by
/// their smallest puncture.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CrossinglessDiagram {
    genus: usize,
    blocks: Vec<u64>,
}

#[inline]
pub(crate) fn full_mask(g: usize) -> u64 {
    if g >= 64 {
        u64::MAX
    } else {
        (1u64 << g) - 1
    }
}

pub(crate) fn punctures(mask: u64) -> impl Iterator<Item = usize> {
    let mut w = mask;
    std::iter::from_fn(move || {
        if w == 0 {
            None
        } else {
            let t = w.trailing_zeros() as usize;
            w &= w - 1;
            Some(t + 1)
        }
    })
}

fn blocks_cross(a: u64, b: u64) -> bool {
    // b crosses a iff some gap between consecutive elements of a holds part,
    // but not all, of b.
    let elems: Vec<usize> = punctures(a).collect();
    elems.windows(2).any(|w| {
        let between = full_mask(w[1] - 1) & !full_mask(w[0]);
        let inside = b & between;
        inside != 0 && inside != b
    })
}

impl CrossinglessDiagram {
    pub fn empty(g: usize) -> Self {
        Self {
            genus: g,
            blocks: Vec::new(),
        }
    }

    /// Validates blocks given as bitmasks and sorts them into canonical order.
    pub fn from_masks(g: usize, blocks: Vec<u64>) -> Result<Self, DiagramError> {
        if g > MAX_GENUS {
            return Err(DiagramError::GenusTooLarge(g));
        }
        let all = full_mask(g);
        let mut seen = 0u64;
        for &b in &blocks {
            if b == 0 {
                return Err(DiagramError::Syntax {
                    pos: 0,
                    msg: "empty block".into(),
                });
            }
            if b & !all != 0 {
                let puncture = punctures(b & !all).next().expect("nonzero");
                return Err(DiagramError::PunctureOutOfRange { puncture, genus: g });
            }
            if b & seen != 0 {
                let puncture = punctures(b & seen).next().expect("nonzero");
                return Err(DiagramError::MinimalityViolation { puncture });
            }
            seen |= b;
        }
        for (i, &a) in blocks.iter().enumerate() {
            for &b in &blocks[i + 1..] {
                if blocks_cross(a, b) || blocks_cross(b, a) {
                    return Err(DiagramError::NoncrossingViolation {
                        first: block_symbol(a, g),
                        second: block_symbol(b, g),
                    });
                }
            }
        }
        let mut blocks = blocks;
        blocks.sort_unstable_by_key(|b| b.trailing_zeros());
        Ok(Self { genus: g, blocks })
    }

    /// Validates blocks given as lists of 1-based punctures.
    pub fn from_blocks(g: usize, blocks: &[&[usize]]) -> Result<Self, DiagramError> {
        let mut masks = Vec::with_capacity(blocks.len());
        for block in blocks {
            masks.push(block_mask(g, block)?);
        }
        Self::from_masks(g, masks)
    }

    /// Parses the symbol notation, e.g. `(145)(23)` or `(1,4,10)(2,3)`.
    ///
    /// Within a block, punctures may be separated by commas. Without commas,
    /// each digit is its own puncture, which is only allowed when `g <= 9`.
    pub fn parse(text: &str, g: usize) -> Result<Self, DiagramError> {
        if g > MAX_GENUS {
            return Err(DiagramError::GenusTooLarge(g));
        }
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut blocks = Vec::new();
        let syntax = |pos: usize, msg: &str| DiagramError::Syntax {
            pos,
            msg: msg.to_string(),
        };
        loop {
            while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
                pos += 1;
            }
            if pos == bytes.len() {
                break;
            }
            if bytes[pos] != b'(' {
                return Err(syntax(pos, "expected '('"));
            }
            pos += 1;
            let mut block: Vec<usize> = Vec::new();
            let mut expect_number = true;
            loop {
                match bytes.get(pos) {
                    None => return Err(syntax(pos, "unterminated block")),
                    Some(b')') => {
                        if block.is_empty() {
                            return Err(syntax(pos, "empty block"));
                        }
                        if expect_number && bytes[pos - 1] == b',' {
                            return Err(syntax(pos, "trailing comma"));
                        }
                        pos += 1;
                        break;
                    }
                    Some(b',') => {
                        if expect_number {
                            return Err(syntax(pos, "unexpected ','"));
                        }
                        expect_number = true;
                        pos += 1;
                    }
                    Some(c) if c.is_ascii_digit() => {
                        let start = pos;
                        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                            pos += 1;
                        }
                        let run = &text[start..pos];
                        if g <= 9 {
                            block.extend(run.bytes().map(|d| (d - b'0') as usize));
                        } else {
                            if !expect_number {
                                return Err(syntax(start, "punctures must be comma separated when g > 9"));
                            }
                            let value: usize = run
                                .parse()
                                .map_err(|_| syntax(start, "puncture does not fit"))?;
                            block.push(value);
                        }
                        expect_number = false;
                    }
                    Some(_) => return Err(syntax(pos, "unexpected character")),
                }
            }
            blocks.push(block_mask(g, &block)?);
        }
        Self::from_masks(g, blocks)
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn blocks(&self) -> &[u64] {
        &self.blocks
    }

    /// Blocks as sorted lists of 1-based punctures.
    pub fn block_lists(&self) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|&b| punctures(b).collect()).collect()
    }

    pub fn circled(&self) -> u64 {
        self.blocks.iter().fold(0, |m, b| m | b)
    }

    pub fn uncircled(&self) -> u64 {
        full_mask(self.genus) & !self.circled()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub(crate) fn from_parts_unchecked(genus: usize, mut blocks: Vec<u64>) -> Self {
        blocks.sort_unstable_by_key(|b| b.trailing_zeros());
        Self { genus, blocks }
    }

    fn order_key(&self) -> Vec<Vec<usize>> {
        self.block_lists()
    }
}

fn block_mask(g: usize, block: &[usize]) -> Result<u64, DiagramError> {
    let mut mask = 0u64;
    for &p in block {
        if p == 0 || p > g {
            return Err(DiagramError::PunctureOutOfRange { puncture: p, genus: g });
        }
        let bit = 1u64 << (p - 1);
        if mask & bit != 0 {
            return Err(DiagramError::MinimalityViolation { puncture: p });
        }
        mask |= bit;
    }
    Ok(mask)
}

fn block_symbol(mask: u64, g: usize) -> String {
    let items: Vec<String> = punctures(mask).map(|p| p.to_string()).collect();
    if g <= 9 {
        format!("({})", items.concat())
    } else {
        format!("({})", items.join(","))
    }
}

/// Canonical order: block lists compared lexicographically, each block as
/// its ascending puncture sequence; genus breaks ties.
impl Ord for CrossinglessDiagram {
    fn cmp(&self, other: &Self) -> Ordering {
        self.order_key()
            .cmp(&other.order_key())
            .then(self.genus.cmp(&other.genus))
    }
}

impl PartialOrd for CrossinglessDiagram {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for CrossinglessDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.blocks {
            f.write_str(&block_symbol(b, self.genus))?;
        }
        Ok(())
    }
}

impl fmt::Debug for CrossinglessDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g{}:{}", self.genus, self)
    }
}
