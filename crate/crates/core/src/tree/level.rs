use super::NONE;

/// Constant-time level ancestors: long-path ladders plus jump pointers
/// stored at leaves only. Every node forwards its query to the leaf at the
/// bottom of its long path, jumps by the highest power of two and finishes
/// inside one ladder.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelAncestor {
    depth: Vec<u32>,
    leaf_below: Vec<u32>,
    ladder_pos: Vec<u32>,
    ladders: Vec<u32>,
    jump_start: Vec<u32>,
    jumps: Vec<u32>,
}

impl LevelAncestor {
    /// `parent[v] == NONE` marks a root.
    pub fn build(parent: &[u32]) -> Self {
        let m = parent.len();
        let mut child_start = vec![0u32; m + 1];
        for &p in parent {
            if p != NONE {
                child_start[p as usize + 1] += 1;
            }
        }
        for v in 0..m {
            child_start[v + 1] += child_start[v];
        }
        let mut fill = child_start.clone();
        let mut child_list = vec![0u32; child_start[m] as usize];
        for (v, &p) in parent.iter().enumerate() {
            if p != NONE {
                child_list[fill[p as usize] as usize] = v as u32;
                fill[p as usize] += 1;
            }
        }
        drop(fill);
        let children = |v: usize| &child_list[child_start[v] as usize..child_start[v + 1] as usize];

        let mut order = Vec::with_capacity(m);
        let mut depth = vec![0u32; m];
        let mut stack: Vec<u32> = (0..m as u32).filter(|&v| parent[v as usize] == NONE).collect();
        while let Some(v) = stack.pop() {
            order.push(v);
            for &c in children(v as usize) {
                depth[c as usize] = depth[v as usize] + 1;
                stack.push(c);
            }
        }
        debug_assert_eq!(order.len(), m, "parent array has a cycle");

        let mut height = vec![0u32; m];
        let mut long_child = vec![NONE; m];
        for &v in order.iter().rev() {
            let p = parent[v as usize];
            if p != NONE && (long_child[p as usize] == NONE || height[v as usize] + 1 > height[p as usize]) {
                height[p as usize] = height[v as usize] + 1;
                long_child[p as usize] = v;
            }
        }

        let mut leaf_below = vec![NONE; m];
        let mut ladder_pos = vec![0u32; m];
        let mut ladders = Vec::with_capacity(2 * m);
        let mut path = Vec::new();
        for &top in &order {
            let p = parent[top as usize];
            if p != NONE && long_child[p as usize] == top {
                continue;
            }
            path.clear();
            let mut x = top;
            while x != NONE {
                path.push(x);
                x = long_child[x as usize];
            }
            let bottom = *path.last().unwrap();
            let start = ladders.len();
            let mut up = parent[top as usize];
            let mut extension = 0;
            while up != NONE && extension < path.len() {
                ladders.push(up);
                up = parent[up as usize];
                extension += 1;
            }
            ladders[start..].reverse();
            for &v in &path {
                ladder_pos[v as usize] = ladders.len() as u32;
                ladders.push(v);
                leaf_below[v as usize] = bottom;
            }
        }

        let mut jump_start = vec![NONE; m];
        let mut jumps = Vec::new();
        let mut root_path: Vec<u32> = Vec::new();
        for &v in &order {
            let d = depth[v as usize] as usize;
            root_path.truncate(d);
            root_path.push(v);
            if children(v as usize).is_empty() && d > 0 {
                jump_start[v as usize] = jumps.len() as u32;
                let mut step = 1;
                while step <= d {
                    jumps.push(root_path[d - step]);
                    step <<= 1;
                }
            }
        }

        LevelAncestor {
            depth,
            leaf_below,
            ladder_pos,
            ladders,
            jump_start,
            jumps,
        }
    }

    #[inline]
    pub fn depth(&self, v: u32) -> usize {
        self.depth[v as usize] as usize
    }

    /// The ancestor `d` edges above `v`; `d` must not exceed `depth(v)`.
    #[inline]
    pub fn ancestor(&self, v: u32, d: usize) -> u32 {
        assert!(
            d <= self.depth(v),
            "level ancestor {d} above node at depth {}",
            self.depth(v)
        );
        if d == 0 {
            return v;
        }
        let leaf = self.leaf_below[v as usize];
        let dist = d + self.depth(leaf) - self.depth(v);
        let k = usize::BITS as usize - 1 - dist.leading_zeros() as usize;
        let x = self.jumps[self.jump_start[leaf as usize] as usize + k];
        let rest = dist - (1 << k);
        self.ladders[self.ladder_pos[x as usize] as usize - rest]
    }

    pub fn heap_bytes(&self) -> usize {
        4 * (self.depth.len() * 4 + self.ladders.len() + self.jumps.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive(parent: &[u32], mut v: u32, d: usize) -> u32 {
        for _ in 0..d {
            v = parent[v as usize];
        }
        v
    }

    fn check(parent: &[u32]) {
        let la = LevelAncestor::build(parent);
        for v in 0..parent.len() as u32 {
            for d in 0..=la.depth(v) {
                assert_eq!(la.ancestor(v, d), naive(parent, v, d), "v={v} d={d}");
            }
        }
    }

    #[test]
    fn chain_and_star() {
        let chain: Vec<u32> = (0..200u32).map(|v| if v == 0 { NONE } else { v - 1 }).collect();
        check(&chain);
        let star: Vec<u32> = (0..50u32).map(|v| if v == 0 { NONE } else { 0 }).collect();
        check(&star);
        check(&[NONE]);
    }

    proptest! {
        #[test]
        fn random_trees(seeds in proptest::collection::vec(any::<u32>(), 1..300)) {
            // node v attaches to an arbitrary earlier node
            let parent: Vec<u32> = seeds
                .iter()
                .enumerate()
                .map(|(v, &s)| if v == 0 { NONE } else { s % v as u32 })
                .collect();
            check(&parent);
        }

        #[test]
        fn deep_random_trees(seeds in proptest::collection::vec(0u32..3, 1..300)) {
            let parent: Vec<u32> = seeds
                .iter()
                .enumerate()
                .map(|(v, &s)| if v == 0 { NONE } else { (v as u32 - 1).saturating_sub(s) })
                .collect();
            check(&parent);
        }
    }
}
