use super::{LevelAncestor, NodeId, SuffixTree, NONE};
use crate::direction::Direction;

/// Branching ancestors in one direction.
///
/// A proper ancestor `u` of `v` is left-branching for `v`'s path when the
/// child of `u` leading to `v` is not `u`'s first child (right-branching:
/// not its last child). The skeleton links each node to its nearest
/// branching ancestor, falling back to the root, so the `d`-th branching
/// ancestor is a plain level-ancestor query on the skeleton.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BranchingIndex {
    dir: Direction,
    /// Number of proper ancestors that branch for the node's path.
    count: Vec<u32>,
    skeleton: LevelAncestor,
}

impl BranchingIndex {
    pub fn build(tree: &SuffixTree, dir: Direction) -> Self {
        let m = tree.node_count();
        let mut count = vec![0u32; m];
        let mut skel = vec![NONE; m];
        let root = tree.root();
        for &u in tree.preorder() {
            let kids = tree.children(u);
            let last = kids.len().saturating_sub(1);
            for (j, &c) in kids.iter().enumerate() {
                let branches = match dir {
                    Direction::Left => j > 0,
                    Direction::Right => j < last,
                };
                count[c as usize] = count[u as usize] + branches as u32;
                skel[c as usize] = if branches || u == root { u } else { skel[u as usize] };
            }
        }
        BranchingIndex {
            dir,
            count,
            skeleton: LevelAncestor::build(&skel),
        }
    }

    pub fn dir(&self) -> Direction {
        self.dir
    }

    /// Branching proper ancestors of `v`, judged against `v`'s own path.
    #[inline]
    pub fn branch_count(&self, v: NodeId) -> usize {
        self.count[v as usize] as usize
    }

    /// The `d`-th branching ancestor of `v`, counting upward from `v`
    /// (`d = 1` is the nearest). Requires `1 <= d <= branch_count(v)`.
    #[inline]
    pub fn nth_branching_ancestor(&self, v: NodeId, d: usize) -> NodeId {
        assert!(
            d >= 1 && d <= self.branch_count(v),
            "branching ancestor {d} of node {v} out of range 1..={}",
            self.branch_count(v)
        );
        self.skeleton.ancestor(v, d)
    }

    pub fn heap_bytes(&self) -> usize {
        self.count.len() * 4 + self.skeleton.heap_bytes()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{SuffixArrays, Text};

    /// Branching ancestors of `v` by the suffix definition: `u` branches left
    /// iff some suffix smaller than `v`'s string has common prefix exactly
    /// `str(u)` with it.
    fn oracle_list(s: &[u8], tree: &SuffixTree, v: NodeId, dir: Direction) -> Vec<NodeId> {
        let (start, len) = tree.label(v);
        let target = &s[start..start + len];
        let mut out = Vec::new();
        let mut u = tree.parent(v);
        while let Some(x) = u {
            let d = tree.string_depth(x);
            let witnessed = (0..s.len()).any(|q| {
                let suf = &s[q..];
                let h = suf.iter().zip(target).take_while(|(a, b)| a == b).count();
                h == d
                    && match dir {
                        Direction::Left => suf < target,
                        Direction::Right => suf > target,
                    }
            });
            if witnessed {
                out.push(x);
            }
            u = tree.parent(x);
        }
        out
    }

    fn check(raw: &[u8]) {
        let t = Text::new(raw).unwrap();
        let a = SuffixArrays::build(&t);
        let st = SuffixTree::build(&a);
        for dir in Direction::BOTH {
            let bi = BranchingIndex::build(&st, dir);
            assert_eq!(bi.branch_count(st.root()), 0);
            for v in 0..st.node_count() as u32 {
                let list = oracle_list(t.as_bytes(), &st, v, dir);
                assert_eq!(bi.branch_count(v), list.len(), "count at {v} {dir:?}");
                for (d, &u) in list.iter().enumerate() {
                    assert_eq!(bi.nth_branching_ancestor(v, d + 1), u);
                }
            }
        }
    }

    #[test]
    fn sippi_has_only_the_root() {
        let t = Text::new(b"mississippi").unwrap();
        let a = SuffixArrays::build(&t);
        let st = SuffixTree::build(&a);
        let bi = BranchingIndex::build(&st, Direction::Left);
        let v = st.leaf_of(6);
        assert_eq!(bi.branch_count(v), 1);
        assert_eq!(bi.nth_branching_ancestor(v, 1), st.root());
        check(b"mississippi");
    }

    #[test]
    fn random_texts_match_definition() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for _ in 0..15 {
            let len = rng.gen_range(1..150);
            let sigma = rng.gen_range(1..4);
            let raw: Vec<u8> = (0..len).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
            check(&raw);
        }
        check(&[b'a'; 100]);
    }
}
