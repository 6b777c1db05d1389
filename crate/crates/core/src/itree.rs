//! Weighted trees over maximal runs of reducible positions.
//!
//! The tree based at irreducible `p'` holds `p'` and every reducible position
//! after it up to the next irreducible one. A reducible `r` weighs
//! `w_r = r - p' + c_r`; the root weighs [`INFINITE`]. The parent of `r` is
//! the nearest earlier position of strictly greater weight, so weights grow
//! toward the root and the nearest ancestor of weight at least `W` is the
//! latest `t <= p` at which a counting query can be answered.
//!
//! Each tree is split into heavy paths. A query first picks the path through
//! the top weights of the paths above it, then finds the lowest qualifying
//! node on that path with a sampled bit array `â` over the path's weights at
//! granularity [`GRANULE`] and a scan of one block. Paths below the root copy
//! the shape of a subtree of the neighbouring tree, so most of them borrow an
//! `â` built for that tree instead of owning one.

use crate::bits::{BitArray, RankedBits};
use crate::direction::Direction;
use crate::irreducible::IrreducibleStore;
use crate::neighbours::NeighbourTable;
use crate::probe::Probe;
use crate::tree::NONE;

/// Weight of every tree root.
pub const INFINITE: u32 = u32::MAX;
/// Sampling granularity of `â`.
pub const GRANULE: u32 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Sampling {
    /// The path is short enough that direct comparisons suffice.
    None = 0,
    Owned = 1,
    /// Borrowed from the root path of the neighbouring tree.
    SharedRoot = 2,
    /// Borrowed from a reuse slot of a root child of the neighbouring tree.
    SharedSlot = 3,
}

impl Sampling {
    pub(crate) fn from_tag(tag: u8) -> Option<Self> {
        Some(match tag {
            0 => Sampling::None,
            1 => Sampling::Owned,
            2 => Sampling::SharedRoot,
            3 => Sampling::SharedSlot,
            _ => return None,
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ForestStats {
    pub trees: usize,
    pub paths: usize,
    pub sampled_paths: usize,
    pub owned_root: usize,
    /// Owned arrays on paths below a root, from fallbacks or disabled sharing.
    pub owned_other: usize,
    pub shared_root: usize,
    pub shared_slot: usize,
    pub slot_arrays: usize,
    pub max_slots_per_tree: usize,
    /// Borrow attempts rejected because the borrowed weights did not line up.
    pub fallbacks: usize,
    pub sample_bits: usize,
    pub max_light_edges: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ITreeForest {
    pub(crate) dir: Direction,
    // Per position.
    pub(crate) tree_of: Vec<u32>,
    pub(crate) weight: Vec<u32>,
    pub(crate) parent: Vec<u32>,
    /// 1-based attachment order among siblings; 0 for roots.
    pub(crate) ordinal: Vec<u32>,
    pub(crate) path_of: Vec<u32>,
    // Per tree.
    pub(crate) tree_base: Vec<u32>,
    pub(crate) tree_ell: Vec<u32>,
    pub(crate) child_start: Vec<u32>,
    pub(crate) root_children: Vec<u32>,
    /// Parallel to `root_children`: index into `samples` or [`NONE`].
    pub(crate) slots: Vec<u32>,
    // Per heavy path; nodes are stored bottom-up.
    pub(crate) path_start: Vec<u32>,
    pub(crate) path_nodes: Vec<u32>,
    pub(crate) path_weights: Vec<u32>,
    pub(crate) path_m: Vec<u32>,
    pub(crate) path_sampling: Vec<Sampling>,
    pub(crate) path_sample: Vec<u32>,
    /// Start index (within the path) of every nonempty block, then `e`.
    pub(crate) block_start: Vec<u32>,
    pub(crate) blocks: Vec<u32>,
    /// Top weights of the path and of every path above it, increasing.
    pub(crate) top_start: Vec<u32>,
    pub(crate) top_weights: Vec<u32>,
    pub(crate) top_paths: Vec<u32>,
    pub(crate) samples: Vec<RankedBits>,
    pub(crate) stats: ForestStats,
}

impl ITreeForest {
    pub fn build(irr: &IrreducibleStore, nt: &NeighbourTable, share: bool) -> Self {
        assert_eq!(irr.dir(), nt.dir());
        let n = nt.len();
        let mut f = ITreeForest {
            dir: irr.dir(),
            tree_of: vec![0; n],
            weight: vec![0; n],
            parent: vec![NONE; n],
            ordinal: vec![0; n],
            path_of: vec![0; n],
            tree_base: Vec::new(),
            tree_ell: Vec::new(),
            child_start: Vec::new(),
            root_children: Vec::new(),
            slots: Vec::new(),
            path_start: vec![0],
            path_nodes: Vec::with_capacity(n),
            path_weights: Vec::with_capacity(n),
            path_m: Vec::new(),
            path_sampling: Vec::new(),
            path_sample: Vec::new(),
            block_start: vec![0],
            blocks: Vec::new(),
            top_start: vec![0],
            top_weights: Vec::new(),
            top_paths: Vec::new(),
            samples: Vec::new(),
            stats: ForestStats::default(),
        };
        f.link(irr, nt);
        f.decompose();
        f.sample_paths(nt, share);
        f
    }

    /// Parents by a stack of candidate ancestors, weights decreasing upward.
    fn link(&mut self, irr: &IrreducibleStore, nt: &NeighbourTable) {
        let n = self.weight.len();
        let mut kids = vec![0u32; n];
        let mut stack: Vec<u32> = Vec::new();
        let mut base = 0;
        for p in 0..n {
            if irr.is_irreducible(p) {
                base = p;
                self.tree_base.push(p as u32);
                self.tree_ell.push(irr.ell(p) as u32);
                self.child_start.push(self.root_children.len() as u32);
                self.weight[p] = INFINITE;
                stack.clear();
                stack.push(p as u32);
            } else {
                let w = (p - base + nt.overlap(p)) as u32;
                while self.weight[*stack.last().unwrap() as usize] <= w {
                    stack.pop();
                }
                let up = *stack.last().unwrap();
                kids[up as usize] += 1;
                self.parent[p] = up;
                self.ordinal[p] = kids[up as usize];
                self.weight[p] = w;
                if up as usize == base {
                    self.root_children.push(p as u32);
                }
                stack.push(p as u32);
            }
            self.tree_of[p] = (self.tree_base.len() - 1) as u32;
        }
        self.child_start.push(self.root_children.len() as u32);
        self.slots = vec![NONE; self.root_children.len()];
        self.stats.trees = self.tree_base.len();
    }

    fn decompose(&mut self) {
        let n = self.weight.len();
        let mut size = vec![1u32; n];
        for p in (0..n).rev() {
            if self.parent[p] != NONE {
                size[self.parent[p] as usize] += size[p];
            }
        }
        let mut heavy = vec![NONE; n];
        for p in 0..n {
            let up = self.parent[p];
            if up != NONE && 2 * size[p] > size[up as usize] {
                heavy[up as usize] = p as u32;
            }
        }
        drop(size);
        let mut light = vec![0u32; n];
        for p in 0..n {
            let up = self.parent[p];
            if up != NONE {
                light[p] = light[up as usize] + (heavy[up as usize] != p as u32) as u32;
                self.stats.max_light_edges = self.stats.max_light_edges.max(light[p] as usize);
            }
        }
        drop(light);
        let mut chain = Vec::new();
        for p in 0..n {
            let up = self.parent[p];
            if up != NONE && heavy[up as usize] == p as u32 {
                continue;
            }
            let id = self.path_m.len() as u32;
            chain.clear();
            let mut v = p as u32;
            while v != NONE {
                chain.push(v);
                v = heavy[v as usize];
            }
            for &v in chain.iter().rev() {
                self.path_of[v as usize] = id;
                self.path_nodes.push(v);
                self.path_weights.push(self.weight[v as usize]);
            }
            self.path_start.push(self.path_nodes.len() as u32);
            let ell = self.tree_ell[self.tree_of[p] as usize];
            let ws = self.weights_of(id as usize);
            let m = ws.partition_point(|&w| w <= ell);
            self.path_m.push(m as u32);

            self.top_weights.push(self.weight[p]);
            self.top_paths.push(id);
            if up != NONE {
                let above = self.path_of[up as usize] as usize;
                let (lo, hi) = (self.top_start[above] as usize, self.top_start[above + 1] as usize);
                self.top_weights.extend_from_within(lo..hi);
                self.top_paths.extend_from_within(lo..hi);
            }
            self.top_start.push(self.top_weights.len() as u32);
        }
        self.stats.paths = self.path_m.len();
    }

    fn sample_paths(&mut self, nt: &NeighbourTable, share: bool) {
        let paths = self.path_m.len();
        self.path_sampling = vec![Sampling::None; paths];
        self.path_sample = vec![NONE; paths];
        for h in 0..paths {
            let e = self.encoded(h);
            let ws = &self.path_weights[self.path_start[h] as usize..self.path_start[h + 1] as usize];
            if e >= 2 {
                self.blocks.push(0);
                for j in 1..e {
                    if (ws[j] - ws[0]) / GRANULE != (ws[j - 1] - ws[0]) / GRANULE {
                        self.blocks.push(j as u32);
                    }
                }
                self.blocks.push(e as u32);
            }
            self.block_start.push(self.blocks.len() as u32);
        }
        // Root paths own their arrays; others may borrow them.
        for t in 0..self.tree_base.len() {
            let h = self.path_of[self.tree_base[t] as usize] as usize;
            if self.path_m[h] >= 1 {
                let id = self.push_sample(h);
                self.path_sampling[h] = Sampling::Owned;
                self.path_sample[h] = id;
                self.stats.owned_root += 1;
            }
        }
        for h in 0..paths {
            let e = self.encoded(h);
            if e < 2 {
                continue;
            }
            self.stats.sampled_paths += 1;
            let top = *self.nodes_of(h).last().unwrap() as usize;
            if self.parent[top] == NONE {
                continue;
            }
            let borrowed = if share { self.borrow(h, nt) } else { None };
            let (kind, id) = borrowed.unwrap_or_else(|| {
                self.stats.owned_other += 1;
                (Sampling::Owned, self.push_sample(h))
            });
            match kind {
                Sampling::SharedRoot => self.stats.shared_root += 1,
                Sampling::SharedSlot => self.stats.shared_slot += 1,
                _ => {}
            }
            self.path_sampling[h] = kind;
            self.path_sample[h] = id;
        }
        for t in 0..self.tree_base.len() {
            self.stats.max_slots_per_tree = self.stats.max_slots_per_tree.max(self.slots_used(t));
        }
        self.stats.sample_bits = self.samples.iter().map(|s| s.len()).sum();
    }

    /// Finds the array of the path in a neighbouring tree whose shape the
    /// path `h` repeats, creating a reuse slot when needed.
    fn borrow(&mut self, h: usize, nt: &NeighbourTable) -> Option<(Sampling, u32)> {
        let nodes = self.nodes_of(h);
        let k = nodes.len();
        let e = self.encoded(h);
        let m = self.path_m[h] as usize;
        let ws = self.weights_of(h);
        let (p, below) = (nodes[k - 1] as usize, nodes[k - 2] as usize);
        let base = self.tree_base[self.tree_of[p] as usize] as usize;
        let r = nt.neighbour(p);
        let tr = self.tree_of[r] as usize;
        let ell_r = self.tree_ell[tr];
        let (tree, ordinal) = if ell_r >= ws[e - 1] - (p - base) as u32 {
            (tr, self.ordinal[below])
        } else {
            let r_bar = nt.neighbour(below);
            let tb = self.tree_of[r_bar] as usize;
            if self.tree_ell[tb] < ws[m - 2] - (below - base) as u32 {
                log::warn!("{:?} path {h}: neighbour of {below} is too shallow to share", self.dir);
                self.stats.fallbacks += 1;
                return None;
            }
            (tb, self.ordinal[nodes[k - 3] as usize])
        };
        let (lo, hi) = (self.child_start[tree] as usize, self.child_start[tree + 1] as usize);
        if ordinal as usize > hi - lo {
            self.stats.fallbacks += 1;
            return None;
        }
        let slot = lo + ordinal as usize - 1;
        let child = self.root_children[slot] as usize;
        let root_path = self.path_of[self.tree_base[tree] as usize] as usize;
        let target = self.path_of[child] as usize;
        if !self.aligned(h, target) {
            log::warn!("{:?} path {h}: borrowed weights do not line up", self.dir);
            self.stats.fallbacks += 1;
            return None;
        }
        if target == root_path {
            return Some((Sampling::SharedRoot, self.path_sample[root_path]));
        }
        if self.slots[slot] == NONE {
            self.slots[slot] = self.push_sample(target);
            self.stats.slot_arrays += 1;
        }
        Some((Sampling::SharedSlot, self.slots[slot]))
    }

    /// The first `e` weights of `h` and the encoded weights of `target`
    /// differ by a constant shift.
    fn aligned(&self, h: usize, target: usize) -> bool {
        let e = self.encoded(h);
        let (a, b) = (self.weights_of(h), self.weights_of(target));
        self.path_m[target] as usize >= e && (0..e).all(|j| a[j] - a[0] == b[j] - b[0])
    }

    /// Owned `â` over the weights of `h` that are at most the tree's `ℓ`.
    fn push_sample(&mut self, h: usize) -> u32 {
        let ws = self.weights_of(h);
        let m = self.path_m[h] as usize;
        let span = ((ws[m - 1] - ws[0]) / GRANULE) as usize + 1;
        let mut bits = BitArray::zeros(span);
        for &w in &ws[..m] {
            bits.set(((w - ws[0]) / GRANULE) as usize, true);
        }
        self.samples.push(RankedBits::new(bits));
        (self.samples.len() - 1) as u32
    }

    fn weights_of(&self, h: usize) -> &[u32] {
        &self.path_weights[self.path_start[h] as usize..self.path_start[h + 1] as usize]
    }

    fn nodes_of(&self, h: usize) -> &[u32] {
        &self.path_nodes[self.path_start[h] as usize..self.path_start[h + 1] as usize]
    }

    /// Weights covered by `â`; the last two below the cut are compared directly.
    #[inline]
    fn encoded(&self, h: usize) -> usize {
        (self.path_m[h] as usize).saturating_sub(2)
    }

    pub fn dir(&self) -> Direction {
        self.dir
    }

    pub fn len(&self) -> usize {
        self.weight.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weight.is_empty()
    }

    pub fn stats(&self) -> &ForestStats {
        &self.stats
    }

    pub fn tree_count(&self) -> usize {
        self.tree_base.len()
    }

    /// Base position `p'` of the tree containing `p`.
    #[inline]
    pub fn base(&self, p: usize) -> usize {
        self.tree_base[self.tree_of[p] as usize] as usize
    }

    pub fn tree_of(&self, p: usize) -> usize {
        self.tree_of[p] as usize
    }

    pub fn tree_base(&self, t: usize) -> usize {
        self.tree_base[t] as usize
    }

    #[inline]
    pub fn weight(&self, p: usize) -> u32 {
        self.weight[p]
    }

    pub fn parent(&self, p: usize) -> Option<usize> {
        (self.parent[p] != NONE).then_some(self.parent[p] as usize)
    }

    pub fn ordinal(&self, p: usize) -> usize {
        self.ordinal[p] as usize
    }

    pub fn path_count(&self) -> usize {
        self.path_m.len()
    }

    pub fn path_of(&self, p: usize) -> usize {
        self.path_of[p] as usize
    }

    /// Path nodes, bottom-up.
    pub fn path_nodes(&self, h: usize) -> &[u32] {
        self.nodes_of(h)
    }

    pub fn path_sampling(&self, h: usize) -> Sampling {
        self.path_sampling[h]
    }

    /// Distinct reuse slots filled for the root children of tree `t`.
    pub fn slots_used(&self, t: usize) -> usize {
        let (lo, hi) = (self.child_start[t] as usize, self.child_start[t + 1] as usize);
        self.slots[lo..hi].iter().filter(|&&s| s != NONE).count()
    }

    /// Root children of tree `t` in attachment order.
    pub fn root_children(&self, t: usize) -> &[u32] {
        &self.root_children[self.child_start[t] as usize..self.child_start[t + 1] as usize]
    }

    /// Lowest node of path `h` with weight at least `w`; `w` must not exceed
    /// the top weight or the tree's `ℓ`.
    pub fn path_predecessor<P: Probe>(&self, h: usize, w: u32, probe: &mut P) -> usize {
        let start = self.path_start[h] as usize;
        let ws = &self.path_weights[start..self.path_start[h + 1] as usize];
        let m = self.path_m[h] as usize;
        probe.tick(2);
        let j = if w <= ws[0] {
            0
        } else if w > ws[m - 1] {
            m
        } else if m >= 2 && w > ws[m - 2] {
            m - 1
        } else {
            let e = m - 2;
            if w > ws[e - 1] {
                e
            } else {
                probe.tick(4);
                probe.sampled_rank();
                let sample = &self.samples[self.path_sample[h] as usize];
                let d = ((w - ws[0]) / GRANULE) as usize;
                let blocks = &self.blocks[self.block_start[h] as usize..];
                let r = sample.rank1(d);
                let (lo, hi) = (blocks[r] as usize, blocks[r + 1] as usize);
                lo + ws[lo..hi].iter().filter(|&&x| x < w).count()
            }
        };
        debug_assert!(ws[j] >= w && (j == 0 || ws[j - 1] < w));
        self.path_nodes[start + j] as usize
    }

    /// Nearest ancestor of `p`, inclusive, with weight at least `w`.
    pub fn weighted_ancestor<P: Probe>(&self, p: usize, w: u32, probe: &mut P) -> usize {
        probe.tick(1);
        if self.weight[p] >= w {
            return p;
        }
        let h = self.path_of[p] as usize;
        let (lo, hi) = (self.top_start[h] as usize, self.top_start[h + 1] as usize);
        let j = self.top_weights[lo..hi].iter().filter(|&&x| x < w).count();
        probe.tick(2);
        if j == 0 {
            return self.path_predecessor(h, w, probe);
        }
        let below = self.top_paths[lo + j - 1] as usize;
        let top = self.path_nodes[self.path_start[below + 1] as usize - 1];
        let entry = self.parent[top as usize] as usize;
        probe.tick(2);
        if self.weight[entry] >= w {
            entry
        } else {
            self.path_predecessor(self.top_paths[lo + j] as usize, w, probe)
        }
    }

    pub fn heap_bytes(&self) -> usize {
        let words = self.weight.len() * 5
            + self.tree_base.len() * 3
            + self.root_children.len() * 2
            + self.path_start.len() * 5
            + self.path_nodes.len() * 2
            + self.blocks.len()
            + self.top_start.len()
            + self.top_weights.len() * 2;
        words * 4 + self.path_sampling.len() + self.samples.iter().map(|s| s.heap_bytes()).sum::<usize>()
    }
}
