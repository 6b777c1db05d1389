//! Irreducible positions and their branching-depth bit arrays `b_p`.
//!
//! A position is irreducible when its suffix starts a BWT run in the
//! direction's order. For such `p`, `b_p[d]` is set iff a branching node of
//! string depth `d < ℓ_p` lies on the path from `p`'s leaf to the root; the
//! lowest branching node itself sits at depth exactly `ℓ_p`. All arrays are
//! concatenated into one ranked bit array.

use crate::bits::{BitArray, RankedBits};
use crate::direction::{DirView, Direction};
use crate::text::SuffixArrays;
use crate::tree::SuffixTree;

/// Per-position flags: `p` is irreducible in direction `dir`.
pub fn mark_irreducible(arrays: &SuffixArrays, dir: Direction) -> BitArray {
    let view = DirView::new(arrays, dir);
    BitArray::from_bools((0..view.len()).map(|p| view.is_run_head(view.rank(p))))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrreducibleStore {
    dir: Direction,
    irreducible: RankedBits,
    /// Position whose suffix has directional rank 0; it has no branching node.
    first: u32,
    /// Start of `b_p` in `bits`, indexed by the rank of `p` among irreducible positions.
    offsets: Vec<u64>,
    lens: Vec<u32>,
    bits: RankedBits,
}

impl IrreducibleStore {
    /// Depth-first traversal in directional order. The working array holds,
    /// at node `v`, the branching depths of `v`'s ancestors; every child after
    /// the first marks `v` as branching and hands `b[0..depth(v))` to the
    /// suffix at the child's first leaf when that leaf starts a BWT run.
    pub fn build(tree: &SuffixTree, arrays: &SuffixArrays, dir: Direction) -> Self {
        let view = DirView::new(arrays, dir);
        let n = view.len();
        let irreducible = RankedBits::new(mark_irreducible(arrays, dir));
        let count = irreducible.rank1(n);
        let mut lens = vec![0u32; count];
        for p in 0..n {
            if irreducible.get(p) {
                lens[irreducible.rank1(p)] = view.ell(p) as u32;
            }
        }
        let mut offsets = vec![0u64; count];
        let mut bits = BitArray::new();
        let mut work = BitArray::zeros(n);
        let mut stack: Vec<(u32, usize)> = vec![(tree.root(), 0)];
        while let Some(top) = stack.last_mut() {
            let (v, j) = (top.0, top.1);
            let kids = tree.children(v);
            let depth = tree.string_depth(v);
            if j == kids.len() {
                work.set(depth, false);
                stack.pop();
                continue;
            }
            top.1 += 1;
            let c = match dir {
                Direction::Left => kids[j],
                Direction::Right => kids[kids.len() - 1 - j],
            };
            work.set(depth, j > 0);
            if j > 0 {
                let (lo, hi) = tree.leaf_range(c);
                let i = view.flip(match dir {
                    Direction::Left => lo,
                    Direction::Right => hi,
                });
                debug_assert_eq!(view.lcp_at(i), depth);
                if view.is_run_head(i) {
                    let p = view.pos_at(i);
                    offsets[irreducible.rank1(p)] = bits.len() as u64;
                    bits.extend_from_words(work.words(), depth);
                }
            }
            if !tree.is_leaf(c) {
                stack.push((c, 0));
            }
        }
        let store = IrreducibleStore {
            dir,
            irreducible,
            first: view.pos_at(0) as u32,
            offsets,
            lens,
            bits: RankedBits::new(bits),
        };
        assert!(
            store.total_bits() as f64 <= sum_bound(n),
            "irreducible LCP sum {} exceeds 2 n log2 n for n = {n}",
            store.total_bits()
        );
        store
    }

    pub(crate) fn from_parts(
        dir: Direction,
        irreducible: BitArray,
        first: u32,
        offsets: Vec<u64>,
        lens: Vec<u32>,
        bits: BitArray,
    ) -> Self {
        IrreducibleStore {
            dir,
            irreducible: RankedBits::new(irreducible),
            first,
            offsets,
            lens,
            bits: RankedBits::new(bits),
        }
    }

    pub(crate) fn parts(&self) -> (&BitArray, u32, &[u64], &[u32], &BitArray) {
        (
            self.irreducible.bits(),
            self.first,
            &self.offsets,
            &self.lens,
            self.bits.bits(),
        )
    }

    pub fn dir(&self) -> Direction {
        self.dir
    }

    #[inline]
    pub fn is_irreducible(&self, p: usize) -> bool {
        self.irreducible.get(p)
    }

    pub fn irreducible_count(&self) -> usize {
        self.lens.len()
    }

    pub fn irreducible_positions(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.irreducible.len()).filter(|&p| self.is_irreducible(p))
    }

    #[inline]
    fn slot(&self, p: usize) -> usize {
        assert!(
            self.is_irreducible(p),
            "position {p} is not irreducible ({:?})",
            self.dir
        );
        self.irreducible.rank1(p)
    }

    /// `ℓ_p` for irreducible `p`.
    #[inline]
    pub fn ell(&self, p: usize) -> usize {
        self.lens[self.slot(p)] as usize
    }

    /// Sum of `ℓ_p` over irreducible positions, i.e. the stored bits.
    pub fn total_bits(&self) -> usize {
        self.bits.len()
    }

    /// Ones in `b_p[start..end)`, reading positions `>= ℓ_p` as zero.
    #[inline]
    pub fn count_range(&self, p: usize, start: usize, end: usize) -> usize {
        let k = self.slot(p);
        let len = self.lens[k] as usize;
        let end = end.min(len);
        if start >= end {
            return 0;
        }
        let base = self.offsets[k] as usize;
        self.bits.count_range(base + start, base + end)
    }

    /// Ones in `b_p[lo..=hi]`, zero-padded past `ℓ_p`.
    pub fn bp_count_ones(&self, p: usize, lo: usize, hi: usize) -> usize {
        self.count_range(p, lo, hi.saturating_add(1))
    }

    /// Branching nodes with string depth in `[start..end)` on the path of an
    /// irreducible `p`: the ones of `b_p` plus the lowest branching node at
    /// depth `ℓ_p`.
    #[inline]
    pub fn branching_between(&self, p: usize, start: usize, end: usize) -> usize {
        let ell = self.ell(p);
        let lowest = p as u32 != self.first && start <= ell && ell < end;
        self.count_range(p, start, end) + lowest as usize
    }

    pub fn bp(&self, p: usize) -> Vec<bool> {
        let k = self.slot(p);
        let base = self.offsets[k] as usize;
        (0..self.lens[k] as usize).map(|d| self.bits.get(base + d)).collect()
    }

    pub fn heap_bytes(&self) -> usize {
        self.irreducible.heap_bytes() + self.offsets.len() * 12 + self.bits.heap_bytes()
    }
}

/// `2 n log2 n`, the ceiling on the sum of irreducible LCP values.
pub fn sum_bound(n: usize) -> f64 {
    2.0 * n as f64 * (n as f64).log2()
}
