//! Brute-force counterparts of every queried quantity, written from the
//! definitions. Only node identities come from the suffix tree; everything
//! else is recomputed from the text.

use rand::{Rng, SeedableRng};

use crate::direction::Direction;
use crate::locus::{IndexOptions, LocusIndex};
use crate::tree::{NodeId, SuffixTree};

/// Suffix array by sorting the suffixes.
pub fn naive_sa(s: &[u8]) -> Vec<u32> {
    let mut sa: Vec<u32> = (0..s.len() as u32).collect();
    sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
    sa
}

pub fn common_prefix(s: &[u8], a: usize, b: usize) -> usize {
    s[a..].iter().zip(&s[b..]).take_while(|(x, y)| x == y).count()
}

/// Suffix `q` precedes suffix `p` in the direction's order.
fn precedes(s: &[u8], q: usize, p: usize, dir: Direction) -> bool {
    match dir {
        Direction::Left => s[q..] < s[p..],
        Direction::Right => s[q..] > s[p..],
    }
}

/// String depths of the branching ancestors of leaf `p`, deepest first:
/// every depth at which some preceding suffix leaves the path.
pub fn branching_depths(s: &[u8], p: usize, dir: Direction) -> Vec<usize> {
    let mut depths: Vec<usize> = (0..s.len())
        .filter(|&q| precedes(s, q, p, dir))
        .map(|q| common_prefix(s, p, q))
        .collect();
    depths.sort_unstable_by(|a, b| b.cmp(a));
    depths.dedup();
    depths
}

pub fn naive_count(s: &[u8], p: usize, ell: usize, dir: Direction) -> usize {
    branching_depths(s, p, dir).iter().filter(|&&d| d >= ell).count()
}

/// Common prefix with the nearest preceding suffix.
pub fn naive_ell(s: &[u8], p: usize, dir: Direction) -> usize {
    branching_depths(s, p, dir).first().copied().unwrap_or(0)
}

/// The `b_p` array: branching depths below `ℓ_p`.
pub fn naive_bp(s: &[u8], p: usize, dir: Direction) -> Vec<bool> {
    let depths = branching_depths(s, p, dir);
    let ell = depths.first().copied().unwrap_or(0);
    let mut b = vec![false; ell];
    for &d in &depths[1.min(depths.len())..] {
        b[d] = true;
    }
    b
}

/// Positions whose suffix starts a BWT run in the direction's order.
pub fn naive_irreducible(s: &[u8], dir: Direction) -> Vec<bool> {
    let n = s.len();
    let mut order = naive_sa(s);
    if dir == Direction::Right {
        order.reverse();
    }
    let before = |p: u32| s[(p as usize + n - 1) % n];
    let mut out = vec![false; n];
    for (i, &p) in order.iter().enumerate() {
        out[p as usize] = i == 0 || before(order[i - 1]) != before(p);
    }
    out
}

/// Longest common prefix of `p` with any irreducible suffix other than
/// itself; `ℓ_p` for irreducible `p`.
pub fn naive_overlap(s: &[u8], irreducible: &[bool], p: usize, dir: Direction) -> usize {
    if irreducible[p] {
        return naive_ell(s, p, dir);
    }
    (0..s.len())
        .filter(|&q| q != p && irreducible[q])
        .map(|q| common_prefix(s, p, q))
        .max()
        .unwrap_or(0)
}

/// The latest `t <= p` with `ℓ_t - m <= c_t`, where `m = ℓ_p - ell`.
pub fn naive_weighted_ancestor(ells: &[usize], overlaps: &[usize], p: usize, ell: usize) -> usize {
    let m = ells[p] - ell;
    (0..=p).rev().find(|&t| ells[t] <= m + overlaps[t]).unwrap_or(0)
}

/// Index of the first weight at least `w` in an increasing list.
pub fn naive_path_predecessor(weights: &[u32], w: u32) -> Option<usize> {
    weights.iter().position(|&x| x >= w)
}

/// Root descent reading every symbol of `s[p..=q]`.
pub fn naive_locus(s: &[u8], tree: &SuffixTree, p: usize, q: usize) -> NodeId {
    descend(s, tree, p, q, true)
}

/// Root descent that reads one symbol per edge.
pub fn skip_locus(s: &[u8], tree: &SuffixTree, p: usize, q: usize) -> NodeId {
    descend(s, tree, p, q, false)
}

fn descend(s: &[u8], tree: &SuffixTree, p: usize, q: usize, every_symbol: bool) -> NodeId {
    let ell = q - p + 1;
    let mut v = tree.root();
    let mut depth = 0;
    loop {
        let c = *tree
            .children(v)
            .iter()
            .find(|&&c| s[tree.label(c).0 + depth] == s[p + depth])
            .expect("substring of the text");
        let (start, len) = tree.label(c);
        if every_symbol {
            for k in depth + 1..len.min(ell) {
                assert_eq!(s[start + k], s[p + k], "edge mismatch at depth {k}");
            }
        }
        if len >= ell {
            return c;
        }
        v = c;
        depth = len;
    }
}

/// Branching proper ancestors of `v`, bottom-up, decided by whether a
/// sibling precedes (left) or follows (right) the child on the path.
pub fn naive_branch_list(tree: &SuffixTree, v: NodeId, dir: Direction) -> Vec<NodeId> {
    let mut out = Vec::new();
    let mut child = v;
    while let Some(u) = tree.parent(child) {
        let kids = tree.children(u);
        let j = kids.iter().position(|&k| k == child).unwrap();
        let branches = match dir {
            Direction::Left => j > 0,
            Direction::Right => j + 1 < kids.len(),
        };
        if branches {
            out.push(u);
        }
        child = u;
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Texts up to this length are checked exhaustively.
    pub n_cap: usize,
    /// Random queries for longer texts.
    pub queries: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            n_cap: 300,
            queries: 10_000,
            seed: 1,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub n: usize,
    pub exhaustive: bool,
    pub locus_checks: usize,
    pub count_checks: usize,
    pub bp_checks: usize,
    pub unshared_checks: usize,
}

/// First disagreement between the index and an oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    pub check: &'static str,
    pub p: usize,
    pub q: usize,
    pub dir: Option<Direction>,
    pub expected: usize,
    pub found: usize,
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mismatch at p={} q={}", self.check, self.p, self.q)?;
        if let Some(d) = self.dir {
            write!(f, " dir={}", d.name())?;
        }
        write!(f, ": expected {}, found {}", self.expected, self.found)
    }
}

impl std::error::Error for Mismatch {}

/// Differential checks of an index against the oracles and against a
/// rebuild without array sharing.
pub fn verify(index: &LocusIndex, cfg: &VerifyConfig) -> Result<VerifyReport, Mismatch> {
    let s = index.text().as_bytes();
    let n = s.len();
    let tree = index.tree();
    let exhaustive = n <= cfg.n_cap;
    let mut report = VerifyReport {
        n,
        exhaustive,
        ..Default::default()
    };
    let unshared = LocusIndex::build(index.text().raw(), IndexOptions { share: false }).expect("text of a built index");

    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..n).flat_map(|p| (p..n).map(move |q| (p, q))).collect()
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed);
        (0..cfg.queries)
            .map(|_| {
                let p = rng.gen_range(0..n);
                (p, rng.gen_range(p..n))
            })
            .collect()
    };
    for &(p, q) in &pairs {
        let found = index.locus_with(p, q, &mut ());
        let expected = if exhaustive {
            naive_locus(s, tree, p, q)
        } else {
            skip_locus(s, tree, p, q)
        };
        if found != expected {
            return Err(Mismatch {
                check: "locus",
                p,
                q,
                dir: None,
                expected: expected as usize,
                found: found as usize,
            });
        }
        let other = unshared.locus_with(p, q, &mut ());
        if other != found {
            return Err(Mismatch {
                check: "unshared locus",
                p,
                q,
                dir: None,
                expected: found as usize,
                found: other as usize,
            });
        }
    }
    report.locus_checks = pairs.len();
    report.unshared_checks = pairs.len();

    // Counting and bit-array oracles are quadratic; sample them on long texts.
    let positions: Vec<usize> = if exhaustive {
        (0..n).collect()
    } else {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5eed);
        (0..cfg.queries.min(64)).map(|_| rng.gen_range(0..n)).collect()
    };
    for dir in Direction::BOTH {
        let irr = index.irreducible(dir);
        for &p in &positions {
            let depths = branching_depths(s, p, dir);
            let ells: Vec<usize> = if exhaustive {
                (1..=n - p).collect()
            } else {
                vec![1, 2, (n - p) / 2 + 1, n - p]
            };
            for ell in ells {
                let expected = depths.iter().filter(|&&d| d >= ell).count();
                let found = index.count_branching_at_least(p, ell, dir);
                if found != expected {
                    return Err(Mismatch {
                        check: "count",
                        p,
                        q: p + ell - 1,
                        dir: Some(dir),
                        expected,
                        found,
                    });
                }
                report.count_checks += 1;
            }
            if irr.is_irreducible(p) {
                let expected = naive_bp(s, p, dir);
                let found = irr.bp(p);
                if found != expected {
                    let diff = found
                        .iter()
                        .zip(&expected)
                        .position(|(a, b)| a != b)
                        .unwrap_or(found.len().min(expected.len()));
                    return Err(Mismatch {
                        check: "b_p",
                        p,
                        q: diff,
                        dir: Some(dir),
                        expected: expected.len(),
                        found: found.len(),
                    });
                }
                report.bp_checks += 1;
            }
        }
    }
    Ok(report)
}
