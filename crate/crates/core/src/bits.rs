//! Packed bit arrays with a two-level rank directory.
//!
//! Every range count costs two directory lookups and two popcounts; the
//! directory is built in one pass over the words.

const WORD: usize = 64;
/// Words per superblock (512 bits).
const SUPER_WORDS: usize = 8;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitArray {
    words: Vec<u64>,
    len: usize,
}

impl BitArray {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        BitArray {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn from_bools<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut out = BitArray::new();
        for b in bits {
            out.push(b);
        }
        out
    }

    /// Rebuilds an array from raw words; bits at or above `len` are cleared.
    pub fn from_words(mut words: Vec<u64>, len: usize) -> Self {
        words.resize(len.div_ceil(WORD), 0);
        if len % WORD != 0 {
            let last = words.len() - 1;
            words[last] &= low_mask(len % WORD);
        }
        BitArray { words, len }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i < self.len);
        let w = &mut self.words[i / WORD];
        if bit {
            *w |= 1 << (i % WORD);
        } else {
            *w &= !(1 << (i % WORD));
        }
    }

    pub fn push(&mut self, bit: bool) {
        if self.len % WORD == 0 {
            self.words.push(0);
        }
        self.len += 1;
        if bit {
            let i = self.len - 1;
            self.words[i / WORD] |= 1 << (i % WORD);
        }
    }

    /// Appends the first `len` bits of `src`, a word at a time.
    pub fn extend_from_words(&mut self, src: &[u64], len: usize) {
        if len == 0 {
            return;
        }
        let full = len / WORD;
        let rest = len % WORD;
        let shift = self.len % WORD;
        let new_len = self.len + len;
        self.words.reserve(new_len.div_ceil(WORD) - self.words.len());
        let put = |w: u64, bits: usize, this: &mut BitArray| {
            if shift == 0 {
                this.words.push(w);
            } else {
                let last = this.words.len() - 1;
                this.words[last] |= w << shift;
                if bits > WORD - shift {
                    this.words.push(w >> (WORD - shift));
                }
            }
        };
        for &w in &src[..full] {
            put(w, WORD, self);
        }
        if rest > 0 {
            put(src[full] & low_mask(rest), rest, self);
        }
        self.len = new_len;
        debug_assert_eq!(self.words.len(), self.len.div_ceil(WORD));
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn heap_bytes(&self) -> usize {
        self.words.len() * 8
    }
}

#[inline]
fn low_mask(bits: usize) -> u64 {
    if bits >= WORD {
        !0
    } else {
        (1u64 << bits) - 1
    }
}

/// Cumulative popcounts: one absolute count per superblock, one relative
/// count per word.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankIndex {
    supers: Vec<u64>,
    blocks: Vec<u16>,
}

impl RankIndex {
    pub fn build(bits: &BitArray) -> Self {
        let words = bits.words();
        let mut supers = Vec::with_capacity(words.len() / SUPER_WORDS + 1);
        let mut blocks = Vec::with_capacity(words.len());
        let mut total = 0u64;
        let mut within = 0u16;
        for (i, w) in words.iter().enumerate() {
            if i % SUPER_WORDS == 0 {
                supers.push(total);
                within = 0;
            }
            blocks.push(within);
            let c = w.count_ones();
            within += c as u16;
            total += c as u64;
        }
        supers.push(total);
        RankIndex { supers, blocks }
    }

    /// Ones in `bits[0..i)`; `i` is clipped to the array length.
    #[inline]
    pub fn rank1(&self, bits: &BitArray, i: usize) -> usize {
        let i = i.min(bits.len());
        let w = i / WORD;
        if w == self.blocks.len() {
            return *self.supers.last().unwrap() as usize;
        }
        let base = self.supers[w / SUPER_WORDS] + self.blocks[w] as u64;
        let partial = (bits.words()[w] & low_mask(i % WORD)).count_ones() as u64;
        (base + partial) as usize
    }

    /// Ones in `bits[start..end)` intersected with the array; positions past
    /// the end read as zero and an inverted range is empty.
    #[inline]
    pub fn count_range(&self, bits: &BitArray, start: usize, end: usize) -> usize {
        if start >= end {
            return 0;
        }
        self.rank1(bits, end) - self.rank1(bits, start)
    }

    pub fn heap_bytes(&self) -> usize {
        self.supers.len() * 8 + self.blocks.len() * 2
    }
}

/// A bit array bundled with its rank directory.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RankedBits {
    bits: BitArray,
    rank: RankIndex,
}

impl RankedBits {
    pub fn new(bits: BitArray) -> Self {
        let rank = RankIndex::build(&bits);
        RankedBits { bits, rank }
    }

    #[inline]
    pub fn bits(&self) -> &BitArray {
        &self.bits
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.bits.len() && self.bits.get(i)
    }

    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        self.rank.rank1(&self.bits, i)
    }

    /// Half-open range count, clipped to the array.
    #[inline]
    pub fn count_range(&self, start: usize, end: usize) -> usize {
        self.rank.count_range(&self.bits, start, end)
    }

    /// Inclusive range count `[lo..=hi]`; `hi` may run past the end.
    #[inline]
    pub fn count_ones(&self, lo: usize, hi: usize) -> usize {
        self.count_range(lo, hi.saturating_add(1))
    }

    pub fn heap_bytes(&self) -> usize {
        self.bits.heap_bytes() + self.rank.heap_bytes()
    }
}
