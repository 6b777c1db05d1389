//! The query engine.
//!
//! The locus of `s[p..=q]` is the highest node of depth at least
//! `ℓ = q - p + 1` on the path of leaf `p`. That node branches to the left or
//! to the right of the path, so it is the `c`-th branching ancestor in one
//! direction, where `c` counts the branching ancestors of depth at least `ℓ`.
//! Counting is where all the structures meet.

use crate::direction::{DirView, Direction};
use crate::error::{Error, Result};
use crate::irreducible::IrreducibleStore;
use crate::itree::ITreeForest;
use crate::neighbours::NeighbourTable;
use crate::probe::{Probe, QueryCase};
use crate::text::{SuffixArrays, Text};
use crate::tree::{BranchingIndex, LcaIndex, NodeId, SuffixTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndexOptions {
    /// Let heavy paths borrow sampled arrays from neighbouring trees.
    pub share: bool,
}

impl Default for IndexOptions {
    fn default() -> Self {
        IndexOptions { share: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocusIndex {
    pub(crate) text: Text,
    pub(crate) arrays: SuffixArrays,
    pub(crate) tree: SuffixTree,
    pub(crate) lca: LcaIndex,
    pub(crate) branching: [BranchingIndex; 2],
    pub(crate) irreducible: [IrreducibleStore; 2],
    pub(crate) neighbours: [NeighbourTable; 2],
    pub(crate) forests: [ITreeForest; 2],
}

/// Builds the index with default options.
pub fn build_index(raw: &[u8]) -> Result<LocusIndex> {
    LocusIndex::build(raw, IndexOptions::default())
}

impl LocusIndex {
    pub fn build(raw: &[u8], options: IndexOptions) -> Result<Self> {
        let text = Text::new(raw)?;
        let arrays = SuffixArrays::build(&text);
        Ok(Self::assemble(text, arrays, options))
    }

    pub(crate) fn assemble(text: Text, arrays: SuffixArrays, options: IndexOptions) -> Self {
        let tree = SuffixTree::build(&arrays);
        let irreducible = Direction::BOTH.map(|d| IrreducibleStore::build(&tree, &arrays, d));
        let neighbours = Direction::BOTH.map(|d| NeighbourTable::build(&arrays, d));
        let forests = [0, 1].map(|d| ITreeForest::build(&irreducible[d], &neighbours[d], options.share));
        Self::from_components(text, arrays, tree, irreducible, neighbours, forests)
    }

    pub(crate) fn from_components(
        text: Text,
        arrays: SuffixArrays,
        tree: SuffixTree,
        irreducible: [IrreducibleStore; 2],
        neighbours: [NeighbourTable; 2],
        forests: [ITreeForest; 2],
    ) -> Self {
        let lca = LcaIndex::build(&arrays.lcp);
        let branching = Direction::BOTH.map(|d| BranchingIndex::build(&tree, d));
        LocusIndex {
            text,
            arrays,
            tree,
            lca,
            branching,
            irreducible,
            neighbours,
            forests,
        }
    }

    /// Text length including the terminator.
    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn text(&self) -> &Text {
        &self.text
    }

    pub fn arrays(&self) -> &SuffixArrays {
        &self.arrays
    }

    pub fn tree(&self) -> &SuffixTree {
        &self.tree
    }

    pub fn irreducible(&self, dir: Direction) -> &IrreducibleStore {
        &self.irreducible[dir.index()]
    }

    pub fn neighbours(&self, dir: Direction) -> &NeighbourTable {
        &self.neighbours[dir.index()]
    }

    pub fn forest(&self, dir: Direction) -> &ITreeForest {
        &self.forests[dir.index()]
    }

    pub fn string_depth(&self, v: NodeId) -> usize {
        self.tree.string_depth(v)
    }

    /// Path label of `v` as `(start, len)` into the text.
    pub fn label(&self, v: NodeId) -> (usize, usize) {
        self.tree.label(v)
    }

    pub fn leaf_of(&self, p: usize) -> NodeId {
        self.tree.leaf_of(p)
    }

    pub fn check_range(&self, p: usize, q: usize) -> Result<()> {
        if p > q || q >= self.len() {
            return Err(Error::InvalidRange { p, q, n: self.len() });
        }
        Ok(())
    }

    pub fn locus(&self, p: usize, q: usize) -> Result<NodeId> {
        self.check_range(p, q)?;
        Ok(self.locus_with(p, q, &mut ()))
    }

    /// Locus of `s[p..=q]`; the range must be valid.
    pub fn locus_with<P: Probe>(&self, p: usize, q: usize, probe: &mut P) -> NodeId {
        let ell = q - p + 1;
        let leaf = self.tree.leaf_of(p);
        let [left, right] = Direction::BOTH.map(|d| self.count_with(p, ell, d, probe));
        probe.tick(2);
        let candidate = |d: Direction, c: usize| self.branching[d.index()].nth_branching_ancestor(leaf, c);
        match (left, right) {
            (0, 0) => leaf,
            (c, 0) => candidate(Direction::Left, c),
            (0, c) => candidate(Direction::Right, c),
            (a, b) => {
                let (u, v) = (candidate(Direction::Left, a), candidate(Direction::Right, b));
                if self.tree.string_depth(u) <= self.tree.string_depth(v) {
                    u
                } else {
                    v
                }
            }
        }
    }

    /// Branching ancestors in `dir` of leaf `p` with string depth at least `ell`.
    pub fn count_branching_at_least(&self, p: usize, ell: usize, dir: Direction) -> usize {
        self.count_with(p, ell, dir, &mut ())
    }

    pub fn count_with<P: Probe>(&self, p: usize, ell: usize, dir: Direction, probe: &mut P) -> usize {
        let d = dir.index();
        let irr = &self.irreducible[d];
        probe.tick(2);
        if irr.is_irreducible(p) {
            probe.case(QueryCase::Irreducible);
            return irr.branching_between(p, ell, usize::MAX);
        }
        let view = DirView::new(&self.arrays, dir);
        let ell_p = view.ell(p);
        if ell > ell_p {
            probe.case(QueryCase::Empty);
            return 0;
        }
        if ell <= self.neighbours[d].overlap(p) {
            probe.case(QueryCase::Neighbour);
            return self.count_via_neighbour(p, ell, d, probe);
        }
        probe.case(QueryCase::Reduced);
        let forest = &self.forests[d];
        let base = forest.base(p);
        let t = forest.weighted_ancestor(p, (ell + p - base) as u32, probe);
        // Branching nodes below depth ℓ_p keep their offset from ℓ_p along
        // the run, so the threshold moves with the position.
        let shifted = ell + (p - t);
        probe.tick(1);
        if irr.is_irreducible(t) {
            irr.branching_between(t, shifted, usize::MAX)
        } else {
            debug_assert!(shifted <= self.neighbours[d].overlap(t));
            self.count_via_neighbour(t, shifted, d, probe)
        }
    }

    /// Requires `ell <= c_p`. Below the divergence node `u` of `p` and its
    /// neighbour the count comes from the per-node totals; from `u` upward
    /// the paths agree and the neighbour's bit array answers.
    fn count_via_neighbour<P: Probe>(&self, p: usize, ell: usize, d: usize, probe: &mut P) -> usize {
        let nt = &self.neighbours[d];
        let (r, c) = (nt.neighbour(p), nt.overlap(p));
        let leaf = self.tree.leaf_of(p);
        let u = self.lca.lca(&self.tree, self.tree.leaf_of(r), leaf);
        debug_assert_eq!(self.tree.string_depth(u), c);
        let bi = &self.branching[d];
        probe.tick(4);
        bi.branch_count(leaf) - bi.branch_count(u) + self.irreducible[d].branching_between(r, ell, c)
    }

    pub fn stats(&self) -> IndexStats {
        let per_dir = |d: usize| {
            let irr = &self.irreducible[d];
            let fs = self.forests[d].stats();
            DirectionStats {
                irreducible_positions: irr.irreducible_count(),
                irreducible_sum: irr.total_bits(),
                trees: fs.trees,
                heavy_paths: fs.paths,
                sampled_paths: fs.sampled_paths,
                owned_arrays: fs.owned_root + fs.owned_other + fs.slot_arrays,
                shared_arrays: fs.shared_root + fs.shared_slot,
                reuse_slots: fs.slot_arrays,
                max_slots_per_tree: fs.max_slots_per_tree,
                fallbacks: fs.fallbacks,
                sample_bits: fs.sample_bits,
            }
        };
        IndexStats {
            n: self.len(),
            nodes: self.tree.node_count(),
            bwt_runs: self.arrays.bwt_runs(),
            heap_bytes: self.heap_bytes(),
            directions: [per_dir(0), per_dir(1)],
        }
    }

    pub fn heap_bytes(&self) -> usize {
        self.text.len()
            + self.arrays.heap_bytes()
            + self.tree.heap_bytes()
            + self.lca.heap_bytes()
            + (0..2)
                .map(|d| {
                    self.branching[d].heap_bytes()
                        + self.irreducible[d].heap_bytes()
                        + self.neighbours[d].heap_bytes()
                        + self.forests[d].heap_bytes()
                })
                .sum::<usize>()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectionStats {
    pub irreducible_positions: usize,
    pub irreducible_sum: usize,
    pub trees: usize,
    pub heavy_paths: usize,
    pub sampled_paths: usize,
    pub owned_arrays: usize,
    pub shared_arrays: usize,
    pub reuse_slots: usize,
    pub max_slots_per_tree: usize,
    pub fallbacks: usize,
    pub sample_bits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexStats {
    pub n: usize,
    pub nodes: usize,
    pub bwt_runs: usize,
    pub heap_bytes: usize,
    pub directions: [DirectionStats; 2],
}

impl IndexStats {
    /// Structure size in 64-bit words per text position.
    pub fn words_per_position(&self) -> f64 {
        self.heap_bytes as f64 / 8.0 / self.n as f64
    }
}

impl std::fmt::Display for IndexStats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "n = {}", self.n)?;
        writeln!(f, "suffix tree nodes = {}", self.nodes)?;
        writeln!(f, "bwt runs = {}", self.bwt_runs)?;
        for (dir, s) in Direction::BOTH.iter().zip(&self.directions) {
            let d = dir.name();
            writeln!(f, "irreducible LCP sum = {} ({d})", s.irreducible_sum)?;
            writeln!(f, "irreducible positions = {} ({d})", s.irreducible_positions)?;
            writeln!(
                f,
                "trees = {}, heavy paths = {}, sampled paths = {} ({d})",
                s.trees, s.heavy_paths, s.sampled_paths
            )?;
            writeln!(f, "sampled array bits = {} ({d})", s.sample_bits)?;
            writeln!(
                f,
                "owned arrays = {}, shared arrays = {}, reuse slots = {}, max slots per tree = {}, fallbacks = {} ({d})",
                s.owned_arrays, s.shared_arrays, s.reuse_slots, s.max_slots_per_tree, s.fallbacks
            )?;
        }
        writeln!(f, "heap bytes = {}", self.heap_bytes)?;
        write!(f, "words per position (C) = {:.2}", self.words_per_position())
    }
}
