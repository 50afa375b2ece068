use super::{full_mask, punctures, CrossinglessDiagram};

/// Keeps the bits of `mask` that lie in `keep`, packed down in order.
pub(crate) fn compress(mask: u64, keep: u64) -> u64 {
    let mut out = 0u64;
    for (bit, p) in punctures(keep).enumerate() {
        if mask >> (p - 1) & 1 == 1 {
            out |= 1 << bit;
        }
    }
    out
}

/// Inverse of [`compress`]: spreads the low bits of `mask` onto `keep`.
pub(crate) fn expand(mask: u64, keep: u64) -> u64 {
    let mut out = 0u64;
    for (bit, p) in punctures(keep).enumerate() {
        if mask >> bit & 1 == 1 {
            out |= 1 << (p - 1);
        }
    }
    out
}

/// How a diagram reduces to its irreducible core.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionRecord {
    pub original: CrossinglessDiagram,
    /// Every puncture outside the core: uncircled ones and those freed by
    /// deleting singleton blocks.
    pub filled: u64,
    /// Punctures whose singleton blocks were deleted.
    pub deleted_singletons: u64,
    pub core: CrossinglessDiagram,
    /// `relabeling[i]` is the original puncture of core puncture `i + 1`.
    pub relabeling: Vec<usize>,
}

impl ReductionRecord {
    /// Rebuilds the original diagram from the core and the record.
    pub fn reconstruct(&self) -> CrossinglessDiagram {
        let keep = self.relabeling.iter().fold(0u64, |m, &p| m | 1 << (p - 1));
        let mut blocks: Vec<u64> = self.core.blocks().iter().map(|&b| expand(b, keep)).collect();
        blocks.extend(punctures(self.deleted_singletons).map(|p| 1u64 << (p - 1)));
        CrossinglessDiagram::from_parts_unchecked(self.original.genus(), blocks)
    }
}

/// Deletes singleton blocks, then fills every uncircled puncture,
/// relabeling the survivors in order.
pub fn reduce(d: &CrossinglessDiagram) -> ReductionRecord {
    let mut deleted = 0u64;
    let mut core_punctures = 0u64;
    for &b in d.blocks() {
        if b.count_ones() == 1 {
            deleted |= b;
        } else {
            core_punctures |= b;
        }
    }
    let core_genus = core_punctures.count_ones() as usize;
    let core_blocks = d
        .blocks()
        .iter()
        .filter(|b| b.count_ones() > 1)
        .map(|&b| compress(b, core_punctures))
        .collect();
    ReductionRecord {
        original: d.clone(),
        filled: full_mask(d.genus()) & !core_punctures,
        deleted_singletons: deleted,
        core: CrossinglessDiagram::from_parts_unchecked(core_genus, core_blocks),
        relabeling: punctures(core_punctures).collect(),
    }
}

/// No uncircled puncture and no singleton block.
pub fn is_irreducible(d: &CrossinglessDiagram) -> bool {
    d.uncircled() == 0 && d.blocks().iter().all(|b| b.count_ones() > 1)
}

fn cyclically_consecutive(block: u64, g: usize) -> bool {
    let all = full_mask(g);
    if block == all {
        return true;
    }
    // Count the punctures of the block whose cyclic successor is outside it.
    let ends = punctures(block)
        .filter(|&p| {
            let next = if p == g { 1 } else { p + 1 };
            block >> (next - 1) & 1 == 0
        })
        .count();
    ends == 1
}

/// A diagram is special when its reduction is.
pub fn is_special(d: &CrossinglessDiagram) -> bool {
    let core = reduce(d).core;
    special_irreducible(&core)
}

fn special_irreducible(core: &CrossinglessDiagram) -> bool {
    let g = core.genus();
    let Some(&leftmost) = core.blocks().first() else {
        // Only the genus-0 empty diagram is irreducible without blocks.
        return g == 0;
    };
    if !cyclically_consecutive(leftmost, g) {
        return false;
    }
    let first_last_two = 1 | 1 << (g - 1) | 1 << (g - 2);
    if leftmost & first_last_two == first_last_two && leftmost != full_mask(g) {
        return false;
    }
    let keep = full_mask(g) & !leftmost;
    let rest = CrossinglessDiagram::from_parts_unchecked(
        keep.count_ones() as usize,
        core.blocks()[1..].iter().map(|&b| compress(b, keep)).collect(),
    );
    is_special(&rest)
}

/// The three ways of growing an irreducible special diagram: from genus
/// `g − 1` by inserting a puncture after the first one in the leftmost
/// block, and from genus `g − 2` by prepending a new block `{1, 2}` or by
/// wrapping everything in a new block `{1, g}`.
pub fn wrap_constructions(
    from_g_minus_1: &[CrossinglessDiagram],
    from_g_minus_2: &[CrossinglessDiagram],
    g: usize,
) -> Vec<CrossinglessDiagram> {
    let mut out = Vec::new();
    for d in from_g_minus_1 {
        debug_assert_eq!(d.genus() + 1, g);
        // Old puncture 1 stays, old punctures >= 2 shift up by one.
        let keep = full_mask(g) & !0b10;
        let blocks = d
            .blocks()
            .iter()
            .enumerate()
            .map(|(i, &b)| {
                let b = expand(b, keep);
                if i == 0 {
                    b | 0b10
                } else {
                    b
                }
            })
            .collect();
        out.push(CrossinglessDiagram::from_parts_unchecked(g, blocks));
    }
    for d in from_g_minus_2 {
        debug_assert_eq!(d.genus() + 2, g);
        let shifted: Vec<u64> = d.blocks().iter().map(|&b| b << 2).collect();
        let mut prepend = shifted;
        prepend.push(0b11);
        out.push(CrossinglessDiagram::from_parts_unchecked(g, prepend));

        let mut wrap: Vec<u64> = d.blocks().iter().map(|&b| b << 1).collect();
        wrap.push(1 | 1 << (g - 1));
        out.push(CrossinglessDiagram::from_parts_unchecked(g, wrap));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(s: &str, g: usize) -> CrossinglessDiagram {
        CrossinglessDiagram::parse(s, g).unwrap()
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&d("(1)(23)", 3));
        assert_eq!(r.core, d("(12)", 2));
        assert_eq!(r.deleted_singletons, 0b1);
        assert_eq!(r.filled, 0b1);
        assert_eq!(r.relabeling, vec![2, 3]);
        assert_eq!(r.reconstruct(), d("(1)(23)", 3));

        let r = reduce(&CrossinglessDiagram::empty(4));
        assert_eq!(r.core, CrossinglessDiagram::empty(0));
        assert_eq!(r.filled, 0b1111);

        let r = reduce(&d("(1234)", 4));
        assert_eq!(r.core, d("(1234)", 4));
        assert_eq!(r.filled, 0);

        let r = reduce(&d("(2)(36)(45)", 7));
        assert_eq!(r.core, d("(14)(23)", 4));
        assert_eq!(r.filled, 0b1000011);
        assert_eq!(r.reconstruct(), d("(2)(36)(45)", 7));
    }

    #[test]
    fn special_examples() {
        assert!(!is_special(&d("(145)(23)", 5)));
        assert!(!is_special(&d("(14)(23)(56)", 6)));
        assert!(is_special(&d("(1234)", 4)));
        assert!(is_special(&CrossinglessDiagram::empty(0)));
        assert!(is_special(&CrossinglessDiagram::empty(6)));
        // Wrapping blocks at genus 4 are special.
        assert!(is_special(&d("(14)(23)", 4)));
        assert!(is_special(&d("(12)(34)", 4)));
    }

    #[test]
    fn cyclic_intervals() {
        assert!(cyclically_consecutive(0b11001, 5)); // {1,4,5}
        assert!(!cyclically_consecutive(0b001001, 6)); // {1,4}
        assert!(cyclically_consecutive(0b111, 3));
        assert!(cyclically_consecutive(0b100001, 6)); // {1,6}
        assert!(!cyclically_consecutive(0b0101, 4)); // {1,3}
    }

    #[test]
    fn compress_expand_roundtrip() {
        let keep = 0b1011010;
        for mask in 0u64..16 {
            assert_eq!(compress(expand(mask, keep), keep), mask);
        }
    }
}
