//! Suffix tree over a [`SuffixArrays`] bundle, plus LCA and branching
//! level-ancestor indexes.
//!
//! Node ids are dense: leaves come first and leaf `i` is the suffix of
//! lexicographic rank `i`, then the root, then the remaining internal nodes.

mod branching;
mod lca;
mod level;

pub use branching::BranchingIndex;
pub use lca::{LcaIndex, RangeMin};
pub use level::LevelAncestor;

use crate::text::SuffixArrays;

pub type NodeId = u32;
pub const NONE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixTree {
    leaves: usize,
    parent: Vec<u32>,
    depth: Vec<u32>,
    lo: Vec<u32>,
    hi: Vec<u32>,
    child_start: Vec<u32>,
    child_list: Vec<u32>,
    leaf_of: Vec<u32>,
    leaf_suffix: Vec<u32>,
    /// For `i >= 1`, the node where leaves `i - 1` and `i` diverge.
    lcp_node: Vec<u32>,
    preorder: Vec<u32>,
}

impl SuffixTree {
    /// Stack sweep over SA/LCP; every internal node is created exactly once,
    /// when its string depth first appears as an LCP value on the stack.
    pub fn build(arrays: &SuffixArrays) -> Self {
        let n = arrays.len();
        let cap = 2 * n;
        let mut parent = Vec::with_capacity(cap);
        let mut depth = Vec::with_capacity(cap);
        let mut lo = Vec::with_capacity(cap);
        let mut hi = Vec::with_capacity(cap);
        for i in 0..n {
            parent.push(NONE);
            depth.push((n - arrays.sa[i] as usize) as u32);
            lo.push(i as u32);
            hi.push(i as u32);
        }
        let root = n as u32;
        parent.push(NONE);
        depth.push(0);
        lo.push(0);
        hi.push(n as u32 - 1);

        let mut lcp_node = vec![NONE; n];
        let mut stack: Vec<u32> = vec![root];
        for i in 0..n {
            if i > 0 {
                let h = arrays.lcp[i];
                while depth[*stack.last().unwrap() as usize] > h {
                    let last = stack.pop().unwrap();
                    hi[last as usize] = i as u32 - 1;
                    let top = *stack.last().unwrap();
                    if depth[top as usize] >= h {
                        parent[last as usize] = top;
                    } else {
                        let x = parent.len() as u32;
                        parent.push(NONE);
                        depth.push(h);
                        lo.push(lo[last as usize]);
                        hi.push(NONE);
                        parent[last as usize] = x;
                        stack.push(x);
                    }
                }
                lcp_node[i] = *stack.last().unwrap();
            }
            stack.push(i as u32);
        }
        while stack.len() > 1 {
            let last = stack.pop().unwrap();
            hi[last as usize] = n as u32 - 1;
            parent[last as usize] = *stack.last().unwrap();
        }

        let nodes = parent.len();
        // children in lexicographic order: bucket every node by its first leaf
        let mut by_lo_start = vec![0u32; n + 1];
        for v in 0..nodes {
            if v as u32 != root {
                by_lo_start[lo[v] as usize + 1] += 1;
            }
        }
        for i in 0..n {
            by_lo_start[i + 1] += by_lo_start[i];
        }
        let mut by_lo = vec![0u32; nodes - 1];
        let mut fill = by_lo_start.clone();
        for v in 0..nodes {
            if v as u32 != root {
                let slot = &mut fill[lo[v] as usize];
                by_lo[*slot as usize] = v as u32;
                *slot += 1;
            }
        }
        let mut child_start = vec![0u32; nodes + 1];
        for v in 0..nodes {
            if parent[v] != NONE {
                child_start[parent[v] as usize + 1] += 1;
            }
        }
        for v in 0..nodes {
            child_start[v + 1] += child_start[v];
        }
        let mut child_list = vec![0u32; nodes - 1];
        let mut fill = child_start.clone();
        for &v in &by_lo {
            let p = parent[v as usize] as usize;
            child_list[fill[p] as usize] = v;
            fill[p] += 1;
        }

        let mut tree = SuffixTree {
            leaves: n,
            parent,
            depth,
            lo,
            hi,
            child_start,
            child_list,
            leaf_of: arrays.isa.clone(),
            leaf_suffix: arrays.sa.clone(),
            lcp_node,
            preorder: Vec::new(),
        };
        tree.preorder = tree.compute_preorder();
        tree
    }

    fn compute_preorder(&self) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.node_count());
        let mut stack = vec![self.root()];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.children(v).iter().rev());
        }
        out
    }

    #[inline]
    pub fn root(&self) -> NodeId {
        self.leaves as u32
    }

    #[inline]
    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    #[inline]
    pub fn node_count(&self) -> usize {
        self.parent.len()
    }

    #[inline]
    pub fn is_leaf(&self, v: NodeId) -> bool {
        (v as usize) < self.leaves
    }

    #[inline]
    pub fn parent(&self, v: NodeId) -> Option<NodeId> {
        let p = self.parent[v as usize];
        (p != NONE).then_some(p)
    }

    #[inline]
    pub fn string_depth(&self, v: NodeId) -> usize {
        self.depth[v as usize] as usize
    }

    /// Children ordered by edge label.
    #[inline]
    pub fn children(&self, v: NodeId) -> &[u32] {
        let v = v as usize;
        &self.child_list[self.child_start[v] as usize..self.child_start[v + 1] as usize]
    }

    /// Lexicographic ranks of the first and last leaf below `v`.
    #[inline]
    pub fn leaf_range(&self, v: NodeId) -> (usize, usize) {
        (self.lo[v as usize] as usize, self.hi[v as usize] as usize)
    }

    #[inline]
    pub fn leaf_of(&self, p: usize) -> NodeId {
        self.leaf_of[p]
    }

    /// Starting position of the suffix at leaf `v`.
    #[inline]
    pub fn suffix_of(&self, leaf: NodeId) -> usize {
        self.leaf_suffix[leaf as usize] as usize
    }

    /// `str(v)` as a `(start, len)` extent into the text.
    #[inline]
    pub fn label(&self, v: NodeId) -> (usize, usize) {
        (self.suffix_of(self.lo[v as usize]), self.string_depth(v))
    }

    #[inline]
    pub fn lcp_node(&self, i: usize) -> NodeId {
        self.lcp_node[i]
    }

    pub fn preorder(&self) -> &[u32] {
        &self.preorder
    }

    #[inline]
    pub fn is_ancestor(&self, u: NodeId, v: NodeId) -> bool {
        let (ul, uh) = self.leaf_range(u);
        let (vl, vh) = self.leaf_range(v);
        ul <= vl && vh <= uh && self.depth[u as usize] <= self.depth[v as usize]
    }

    pub fn heap_bytes(&self) -> usize {
        4 * (self.parent.len() * 5 + self.child_list.len() + self.leaf_of.len() * 3 + self.preorder.len())
    }
}
