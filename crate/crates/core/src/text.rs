//! Sentinel-terminated texts and their flat index arrays: suffix array,
//! inverse, LCP, both permuted-LCP directions and the BWT.

use crate::error::{Error, Result};

/// Symbol appended to every text; must not occur in the input.
pub const SENTINEL: u8 = 0;

/// A byte string ending with exactly one [`SENTINEL`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Text {
    bytes: Vec<u8>,
}

impl Text {
    pub fn new(raw: &[u8]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyText);
        }
        if let Some(at) = raw.iter().position(|&b| b == SENTINEL) {
            return Err(Error::ReservedSymbol { at });
        }
        if raw.len() >= u32::MAX as usize - 1 {
            return Err(Error::TextTooLong(raw.len()));
        }
        let mut bytes = Vec::with_capacity(raw.len() + 1);
        bytes.extend_from_slice(raw);
        bytes.push(SENTINEL);
        Ok(Text { bytes })
    }

    /// Wraps bytes that already end in the sentinel.
    pub(crate) fn from_terminated(bytes: Vec<u8>) -> Result<Self> {
        match bytes.split_last() {
            Some((&SENTINEL, raw)) => {
                let mut t = Text::new(raw)?;
                t.bytes = bytes;
                Ok(t)
            }
            _ => Err(Error::Corrupt("text is not sentinel-terminated".into())),
        }
    }

    /// Length including the sentinel.
    #[inline]
    pub fn len(&self) -> usize {
        self.bytes.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn as_bytes(&self) -> &[u8] {
        &self.bytes
    }

    /// The input without the sentinel.
    pub fn raw(&self) -> &[u8] {
        &self.bytes[..self.bytes.len() - 1]
    }

    /// Renders a substring with the sentinel shown as `$`.
    pub fn display(&self, start: usize, len: usize) -> String {
        self.bytes[start..start + len]
            .iter()
            .map(|&b| if b == SENTINEL { '$' } else { b as char })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuffixArrays {
    pub sa: Vec<u32>,
    pub isa: Vec<u32>,
    /// `lcp[i]` is the common prefix of suffixes `sa[i-1]` and `sa[i]`; `lcp[0] = 0`.
    pub lcp: Vec<u32>,
    /// Common prefix with the lexicographic predecessor, indexed by position.
    pub plcp_pred: Vec<u32>,
    /// Common prefix with the lexicographic successor, indexed by position.
    pub plcp_succ: Vec<u32>,
    pub bwt: Vec<u8>,
}

impl SuffixArrays {
    pub fn build(text: &Text) -> Self {
        let s = text.as_bytes();
        let n = s.len();
        let symbols: Vec<u32> = s.iter().map(|&b| b as u32).collect();
        let sa = sais(&symbols, 256);
        let mut isa = vec![0u32; n];
        for (i, &p) in sa.iter().enumerate() {
            isa[p as usize] = i as u32;
        }
        let lcp = kasai(s, &sa, &isa);
        let plcp_pred: Vec<u32> = isa.iter().map(|&i| lcp[i as usize]).collect();
        let plcp_succ: Vec<u32> = isa
            .iter()
            .map(|&i| if (i as usize) + 1 < n { lcp[i as usize + 1] } else { 0 })
            .collect();
        let bwt = sa
            .iter()
            .map(|&p| if p == 0 { s[n - 1] } else { s[p as usize - 1] })
            .collect();
        SuffixArrays {
            sa,
            isa,
            lcp,
            plcp_pred,
            plcp_succ,
            bwt,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.sa.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    pub fn bwt_runs(&self) -> usize {
        (0..self.bwt.len())
            .filter(|&i| i == 0 || self.bwt[i - 1] != self.bwt[i])
            .count()
    }

    pub fn heap_bytes(&self) -> usize {
        self.len() * (5 * 4 + 1)
    }
}

/// LCP from SA and ISA in linear time (Kasai).
fn kasai(s: &[u8], sa: &[u32], isa: &[u32]) -> Vec<u32> {
    let n = s.len();
    let mut lcp = vec![0u32; n];
    let mut h = 0usize;
    for p in 0..n {
        let i = isa[p] as usize;
        if i == 0 {
            h = 0;
            continue;
        }
        let q = sa[i - 1] as usize;
        // the unique sentinel stops the scan before either suffix runs out
        while s[p + h] == s[q + h] {
            h += 1;
        }
        lcp[i] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

const EMPTY: u32 = u32::MAX;

/// Induced sorting over an integer alphabet `[0..k)`. The last symbol must be
/// a unique minimum.
fn sais(s: &[u32], k: usize) -> Vec<u32> {
    let n = s.len();
    match n {
        0 => return Vec::new(),
        1 => return vec![0],
        2 => return vec![1, 0],
        _ => {}
    }
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];

    let mut counts = vec![0u32; k];
    for &c in s {
        counts[c as usize] += 1;
    }
    let heads = |out: &mut Vec<u32>| {
        out.clear();
        let mut sum = 0;
        for &c in &counts {
            out.push(sum);
            sum += c;
        }
    };
    let tails = |out: &mut Vec<u32>| {
        out.clear();
        let mut sum = 0;
        for &c in &counts {
            sum += c;
            out.push(sum);
        }
    };
    let mut bucket = Vec::with_capacity(k);

    let induce = |sa: &mut [u32], bucket: &mut Vec<u32>| {
        heads(bucket);
        for i in 0..n {
            let j = sa[i];
            if j != EMPTY && j > 0 && !stype[j as usize - 1] {
                let c = s[j as usize - 1] as usize;
                sa[bucket[c] as usize] = j - 1;
                bucket[c] += 1;
            }
        }
        tails(bucket);
        for i in (0..n).rev() {
            let j = sa[i];
            if j != EMPTY && j > 0 && stype[j as usize - 1] {
                let c = s[j as usize - 1] as usize;
                bucket[c] -= 1;
                sa[bucket[c] as usize] = j - 1;
            }
        }
    };

    let mut sa = vec![EMPTY; n];
    tails(&mut bucket);
    for i in 1..n {
        if is_lms(i) {
            let c = s[i] as usize;
            bucket[c] -= 1;
            sa[bucket[c] as usize] = i as u32;
        }
    }
    induce(&mut sa, &mut bucket);

    // name LMS substrings in their induced order
    let lms_positions: Vec<u32> = (1..n).filter(|&i| is_lms(i)).map(|i| i as u32).collect();
    let m = lms_positions.len();
    let mut name_at = vec![EMPTY; n];
    let mut names = 0u32;
    let mut prev: Option<usize> = None;
    for &j in sa.iter() {
        let j = j as usize;
        if !is_lms(j) {
            continue;
        }
        let same = prev.is_some_and(|p| lms_substrings_equal(s, &stype, p, j));
        if !same {
            names += 1;
        }
        name_at[j] = names - 1;
        prev = Some(j);
    }
    let reduced: Vec<u32> = lms_positions.iter().map(|&p| name_at[p as usize]).collect();
    let reduced_sa = if (names as usize) < m {
        sais(&reduced, names as usize)
    } else {
        let mut r = vec![0u32; m];
        for (i, &c) in reduced.iter().enumerate() {
            r[c as usize] = i as u32;
        }
        r
    };

    sa.fill(EMPTY);
    tails(&mut bucket);
    for &r in reduced_sa.iter().rev() {
        let p = lms_positions[r as usize] as usize;
        let c = s[p] as usize;
        bucket[c] -= 1;
        sa[bucket[c] as usize] = p as u32;
    }
    induce(&mut sa, &mut bucket);
    sa
}

fn lms_substrings_equal(s: &[u32], stype: &[bool], a: usize, b: usize) -> bool {
    let n = s.len();
    if a == n - 1 || b == n - 1 {
        return false;
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];
    let mut i = 0;
    loop {
        if s[a + i] != s[b + i] || stype[a + i] != stype[b + i] {
            return false;
        }
        if i > 0 && (is_lms(a + i) || is_lms(b + i)) {
            return is_lms(a + i) && is_lms(b + i);
        }
        i += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_sa(s: &[u8]) -> Vec<u32> {
        let mut sa: Vec<u32> = (0..s.len() as u32).collect();
        sa.sort_by(|&a, &b| s[a as usize..].cmp(&s[b as usize..]));
        sa
    }

    #[test]
    fn build_text_appends_sentinel() {
        assert_eq!(Text::new(b"mississippi").unwrap().len(), 12);
        assert_eq!(Text::new(b"a").unwrap().len(), 2);
        let t = Text::new(b"banana").unwrap();
        assert_eq!(t.len(), 7);
        assert_eq!(*t.as_bytes().last().unwrap(), SENTINEL);
        assert_eq!(t.raw(), b"banana");
    }

    #[test]
    fn build_text_rejects_bad_input() {
        assert!(matches!(Text::new(b""), Err(Error::EmptyText)));
        assert!(matches!(Text::new(b"ab\0c"), Err(Error::ReservedSymbol { at: 2 })));
    }

    #[test]
    fn mississippi_arrays() {
        let a = SuffixArrays::build(&Text::new(b"mississippi").unwrap());
        assert_eq!(a.sa, [11, 10, 7, 4, 1, 0, 9, 8, 6, 3, 5, 2]);
        assert_eq!(a.lcp, [0, 0, 1, 1, 4, 0, 0, 1, 0, 2, 1, 3]);
        let bwt: String = a.bwt.iter().map(|&b| if b == 0 { '$' } else { b as char }).collect();
        assert_eq!(bwt, "ipssm$pissii");
        assert_eq!(a.bwt_runs(), 9);
    }

    #[test]
    fn unary_text_sorts_backwards() {
        for k in 1..50 {
            let raw = vec![b'a'; k];
            let a = SuffixArrays::build(&Text::new(&raw).unwrap());
            let expect: Vec<u32> = (0..=k as u32).rev().collect();
            assert_eq!(a.sa, expect);
        }
    }

    #[test]
    fn random_texts_match_sorted_suffixes() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        for &sigma in &[1u8, 2, 4, 26] {
            for _ in 0..20 {
                let len = rng.gen_range(1..2000);
                let raw: Vec<u8> = (0..len).map(|_| b'a' + rng.gen_range(0..sigma)).collect();
                let t = Text::new(&raw).unwrap();
                let a = SuffixArrays::build(&t);
                assert_eq!(a.sa, naive_sa(t.as_bytes()));
            }
        }
    }

    proptest! {
        #[test]
        fn bundle_invariants(raw in proptest::collection::vec(1u8..5, 1..300)) {
            let t = Text::new(&raw).unwrap();
            let s = t.as_bytes();
            let a = SuffixArrays::build(&t);
            let n = s.len();
            prop_assert_eq!(&a.sa, &naive_sa(s));
            for i in 0..n {
                prop_assert_eq!(a.isa[a.sa[i] as usize] as usize, i);
                prop_assert_eq!(a.plcp_pred[a.sa[i] as usize], a.lcp[i]);
                if i > 0 {
                    let (p, q) = (a.sa[i - 1] as usize, a.sa[i] as usize);
                    let h = s[p..].iter().zip(&s[q..]).take_while(|(x, y)| x == y).count();
                    prop_assert_eq!(a.lcp[i] as usize, h);
                }
            }
            for p in 0..n {
                let i = a.isa[p] as usize;
                let expect = if i + 1 < n { a.lcp[i + 1] } else { 0 };
                prop_assert_eq!(a.plcp_succ[p], expect);
            }
        }
    }
}
