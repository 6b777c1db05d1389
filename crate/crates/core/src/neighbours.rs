//! Closest irreducible lexicographical neighbours.
//!
//! For a reducible position `p`, the nearest run heads before and after its
//! rank are the only irreducible suffixes that can share the longest prefix
//! with it; `r_p` is whichever shares more (the earlier one on ties) and
//! `c_p` is that common prefix length. For irreducible `p`, `r_p = p` and
//! `c_p = ℓ_p`.

use crate::direction::{DirView, Direction};
use crate::text::SuffixArrays;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NeighbourTable {
    dir: Direction,
    r_of: Vec<u32>,
    c_of: Vec<u32>,
}

/// Marks an undefined following run head.
const UNDEFINED: usize = usize::MAX;

impl NeighbourTable {
    /// Two scans over the directional order; the common prefix with each run
    /// head is the running minimum of the LCP values in between.
    pub fn build(arrays: &SuffixArrays, dir: Direction) -> Self {
        let view = DirView::new(arrays, dir);
        let n = view.len();
        let mut r_of = vec![0u32; n];
        let mut c_of = vec![0u32; n];

        let mut after = vec![(UNDEFINED, 0u32); n];
        let mut next = UNDEFINED;
        let mut run_min = u32::MAX;
        for i in (0..n).rev() {
            if view.is_run_head(i) {
                next = i;
                run_min = u32::MAX;
            } else {
                after[i] = (next, run_min);
            }
            run_min = run_min.min(view.lcp_at(i) as u32);
        }

        let mut head = 0;
        let mut run_min = u32::MAX;
        for i in 0..n {
            let p = view.pos_at(i);
            if view.is_run_head(i) {
                head = i;
                run_min = u32::MAX;
                r_of[p] = p as u32;
                c_of[p] = view.ell(p) as u32;
                continue;
            }
            run_min = run_min.min(view.lcp_at(i) as u32);
            let (succ, succ_lcp) = after[i];
            let (r, c) = if succ == UNDEFINED || run_min >= succ_lcp {
                (view.pos_at(head), run_min)
            } else {
                (view.pos_at(succ), succ_lcp)
            };
            r_of[p] = r as u32;
            c_of[p] = c;
        }
        NeighbourTable { dir, r_of, c_of }
    }

    pub(crate) fn from_parts(dir: Direction, r_of: Vec<u32>, c_of: Vec<u32>) -> Self {
        NeighbourTable { dir, r_of, c_of }
    }

    pub(crate) fn parts(&self) -> (&[u32], &[u32]) {
        (&self.r_of, &self.c_of)
    }

    pub fn dir(&self) -> Direction {
        self.dir
    }

    /// `r_p`.
    #[inline]
    pub fn neighbour(&self, p: usize) -> usize {
        self.r_of[p] as usize
    }

    /// `c_p`.
    #[inline]
    pub fn overlap(&self, p: usize) -> usize {
        self.c_of[p] as usize
    }

    pub fn len(&self) -> usize {
        self.r_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r_of.is_empty()
    }

    pub fn heap_bytes(&self) -> usize {
        self.r_of.len() * 8
    }
}
