use super::{NodeId, SuffixTree};

const BLOCK: usize = 32;

/// Constant-time range-minimum (argmin) over a fixed array: a sparse table
/// over block minima plus one stack bitmask per entry for in-block queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RangeMin {
    values: Vec<u32>,
    masks: Vec<u32>,
    /// `table[k][b]`: argmin over blocks `b .. b + 2^k`.
    table: Vec<Vec<u32>>,
}

impl RangeMin {
    pub fn new(values: Vec<u32>) -> Self {
        let n = values.len();
        let mut masks = vec![0u32; n];
        let mut cur = 0u32;
        for i in 0..n {
            if i % BLOCK == 0 {
                cur = 0;
            }
            let base = i - i % BLOCK;
            while cur != 0 && values[base + msb(cur)] >= values[i] {
                cur ^= 1 << msb(cur);
            }
            cur |= 1 << (i % BLOCK);
            masks[i] = cur;
        }
        let blocks = n.div_ceil(BLOCK);
        let mut level0 = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let end = ((b + 1) * BLOCK).min(n) - 1;
            level0.push(in_block(&masks, b * BLOCK, end) as u32);
        }
        let mut table = vec![level0];
        let mut k = 1;
        while (1 << k) <= blocks {
            let prev = &table[k - 1];
            let half = 1 << (k - 1);
            let row: Vec<u32> = (0..=blocks - (1 << k))
                .map(|b| {
                    let (x, y) = (prev[b], prev[b + half]);
                    if values[y as usize] < values[x as usize] {
                        y
                    } else {
                        x
                    }
                })
                .collect();
            table.push(row);
            k += 1;
        }
        RangeMin { values, masks, table }
    }

    #[inline]
    fn better(&self, a: usize, b: usize) -> usize {
        if self.values[b] < self.values[a] {
            b
        } else {
            a
        }
    }

    /// Index of a minimum in `values[l..=r]`.
    #[inline]
    pub fn argmin(&self, l: usize, r: usize) -> usize {
        debug_assert!(l <= r && r < self.values.len());
        let (bl, br) = (l / BLOCK, r / BLOCK);
        if bl == br {
            return in_block(&self.masks, l, r);
        }
        let mut best = self.better(
            in_block(&self.masks, l, bl * BLOCK + BLOCK - 1),
            in_block(&self.masks, br * BLOCK, r),
        );
        if bl + 1 < br {
            let (from, to) = (bl + 1, br - 1);
            let k = msb((to - from + 1) as u32);
            let row = &self.table[k];
            best = self.better(best, row[from] as usize);
            best = self.better(best, row[to + 1 - (1 << k)] as usize);
        }
        best
    }

    #[inline]
    pub fn value(&self, i: usize) -> u32 {
        self.values[i]
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn heap_bytes(&self) -> usize {
        4 * (self.values.len() + self.masks.len() + self.table.iter().map(Vec::len).sum::<usize>())
    }
}

#[inline]
fn msb(x: u32) -> usize {
    31 - x.leading_zeros() as usize
}

#[inline]
fn in_block(masks: &[u32], l: usize, r: usize) -> usize {
    let base = r - r % BLOCK;
    let m = masks[r] & (!0u32 << (l - base));
    base + m.trailing_zeros() as usize
}

/// Lowest common ancestors through range minima over the LCP array: the
/// divergence node of two adjacent leaves is recorded at tree build, and the
/// LCA of two disjoint subtrees is the divergence node with the smallest LCP
/// between them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcaIndex {
    rmq: RangeMin,
}

impl LcaIndex {
    pub fn build(lcp: &[u32]) -> Self {
        LcaIndex {
            rmq: RangeMin::new(lcp.to_vec()),
        }
    }

    #[inline]
    pub fn lca(&self, tree: &SuffixTree, u: NodeId, v: NodeId) -> NodeId {
        if u == v {
            return u;
        }
        let (ul, uh) = tree.leaf_range(u);
        let (vl, vh) = tree.leaf_range(v);
        if ul <= vl && vh <= uh {
            return u;
        }
        if vl <= ul && uh <= vh {
            return v;
        }
        let (left_hi, right_lo) = if uh < vl { (uh, vl) } else { (vh, ul) };
        tree.lcp_node(self.rmq.argmin(left_hi + 1, right_lo))
    }

    /// Longest common prefix of the suffixes at two positions.
    #[inline]
    pub fn lcp_positions(&self, tree: &SuffixTree, p: usize, q: usize) -> usize {
        if p == q {
            return tree.leaf_count() - p;
        }
        let (a, b) = (tree.leaf_of(p) as usize, tree.leaf_of(q) as usize);
        let (l, r) = if a < b { (a + 1, b) } else { (b + 1, a) };
        self.rmq.value(self.rmq.argmin(l, r)) as usize
    }

    pub fn heap_bytes(&self) -> usize {
        self.rmq.heap_bytes()
    }
}
