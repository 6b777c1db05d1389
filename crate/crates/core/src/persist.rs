//! Index files.
//!
//! Layout: magic, format version, text length, then sections. Each section
//! is a 4-byte tag, a little-endian `u64` payload length, the payload and a
//! CRC-32 of the payload. Readers skip tags they do not know. The suffix
//! tree and its LCA and branching indexes are rebuilt from the stored
//! arrays on load; everything built from them, including which paths share
//! which sampled arrays, is stored as is.

use std::io::{Read, Write};
use std::path::Path;

use crate::bits::{BitArray, RankedBits};
use crate::direction::Direction;
use crate::error::{Error, Result};
use crate::irreducible::IrreducibleStore;
use crate::itree::{ForestStats, ITreeForest, Sampling};
use crate::locus::LocusIndex;
use crate::neighbours::NeighbourTable;
use crate::text::{SuffixArrays, Text};
use crate::tree::{SuffixTree, NONE};

pub const MAGIC: [u8; 8] = *b"WALOCUS\0";
pub const VERSION: u32 = 1;

const SECTIONS: [(&[u8; 4], &str); 8] = [
    (b"TEXT", "text"),
    (b"ARRS", "arrays"),
    (b"IRRL", "left irreducible"),
    (b"IRRR", "right irreducible"),
    (b"NBRL", "left neighbours"),
    (b"NBRR", "right neighbours"),
    (b"FORL", "left forest"),
    (b"FORR", "right forest"),
];

pub fn to_bytes(index: &LocusIndex) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(index.len() as u64).to_le_bytes());
    let payloads = [
        encode_text(&index.text),
        encode_arrays(&index.arrays),
        encode_irreducible(&index.irreducible[0]),
        encode_irreducible(&index.irreducible[1]),
        encode_neighbours(&index.neighbours[0]),
        encode_neighbours(&index.neighbours[1]),
        encode_forest(&index.forests[0]),
        encode_forest(&index.forests[1]),
    ];
    for ((tag, _), payload) in SECTIONS.iter().zip(payloads) {
        out.extend_from_slice(*tag);
        out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
        out.extend_from_slice(&payload);
        out.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
    }
    out
}

pub fn from_bytes(buf: &[u8]) -> Result<LocusIndex> {
    let mut d = Decoder::new(buf);
    if d.take(8)? != MAGIC {
        return Err(Error::Corrupt("not an index file".into()));
    }
    let version = d.u32()?;
    if version != VERSION {
        return Err(Error::Corrupt(format!("unsupported format version {version}")));
    }
    let n = d.u64()? as usize;
    let mut found: [Option<&[u8]>; 8] = [None; 8];
    while !d.done() {
        let tag = d.take(4)?;
        let len = d.u64()? as usize;
        let payload = d.take(len)?;
        let crc = d.u32()?;
        if let Some(k) = SECTIONS.iter().position(|(t, _)| &t[..] == tag) {
            if crc32fast::hash(payload) != crc {
                return Err(Error::Checksum(SECTIONS[k].1));
            }
            found[k] = Some(payload);
        }
    }
    let section = |k: usize| {
        found[k]
            .map(Decoder::new)
            .ok_or_else(|| Error::Corrupt(format!("missing {} section", SECTIONS[k].1)))
    };
    let text = decode_text(&mut section(0)?)?;
    let arrays = decode_arrays(&mut section(1)?)?;
    if text.len() != n || arrays.len() != n {
        return Err(Error::Corrupt("section lengths disagree".into()));
    }
    let irreducible = [
        decode_irreducible(&mut section(2)?, Direction::Left, n)?,
        decode_irreducible(&mut section(3)?, Direction::Right, n)?,
    ];
    let neighbours = [
        decode_neighbours(&mut section(4)?, Direction::Left, n)?,
        decode_neighbours(&mut section(5)?, Direction::Right, n)?,
    ];
    let forests = [
        decode_forest(&mut section(6)?, Direction::Left, n)?,
        decode_forest(&mut section(7)?, Direction::Right, n)?,
    ];
    let tree = SuffixTree::build(&arrays);
    Ok(LocusIndex::from_components(
        text,
        arrays,
        tree,
        irreducible,
        neighbours,
        forests,
    ))
}

pub fn save<W: Write>(index: &LocusIndex, mut w: W) -> Result<()> {
    w.write_all(&to_bytes(index))?;
    w.flush()?;
    Ok(())
}

pub fn load<R: Read>(mut r: R) -> Result<LocusIndex> {
    let mut buf = Vec::new();
    r.read_to_end(&mut buf)?;
    from_bytes(&buf)
}

pub fn save_file(index: &LocusIndex, path: impl AsRef<Path>) -> Result<()> {
    save(index, std::io::BufWriter::new(std::fs::File::create(path)?))
}

pub fn load_file(path: impl AsRef<Path>) -> Result<LocusIndex> {
    from_bytes(&std::fs::read(path)?)
}

#[derive(Default)]
struct Encoder(Vec<u8>);

impl Encoder {
    fn u8(&mut self, v: u8) {
        self.0.push(v);
    }

    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn u64(&mut self, v: u64) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn bytes(&mut self, v: &[u8]) {
        self.u64(v.len() as u64);
        self.0.extend_from_slice(v);
    }

    fn u32s(&mut self, v: &[u32]) {
        self.u64(v.len() as u64);
        for &x in v {
            self.u32(x);
        }
    }

    fn u64s(&mut self, v: &[u64]) {
        self.u64(v.len() as u64);
        for &x in v {
            self.u64(x);
        }
    }

    fn bits(&mut self, b: &BitArray) {
        self.u64(b.len() as u64);
        self.u64s(b.words());
    }
}

struct Decoder<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Decoder<'a> {
    fn new(buf: &'a [u8]) -> Self {
        Decoder { buf, pos: 0 }
    }

    fn done(&self) -> bool {
        self.pos == self.buf.len()
    }

    fn take(&mut self, len: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.buf.len());
        let end = end.ok_or_else(|| Error::Corrupt("truncated".into()))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn count(&mut self, width: usize) -> Result<usize> {
        let len = self.u64()? as usize;
        if len.saturating_mul(width) > self.buf.len() - self.pos {
            return Err(Error::Corrupt("truncated".into()));
        }
        Ok(len)
    }

    fn bytes(&mut self) -> Result<Vec<u8>> {
        let len = self.count(1)?;
        Ok(self.take(len)?.to_vec())
    }

    fn u32s(&mut self) -> Result<Vec<u32>> {
        let len = self.count(4)?;
        (0..len).map(|_| self.u32()).collect()
    }

    fn u64s(&mut self) -> Result<Vec<u64>> {
        let len = self.count(8)?;
        (0..len).map(|_| self.u64()).collect()
    }

    fn bits(&mut self) -> Result<BitArray> {
        let len = self.u64()? as usize;
        let words = self.u64s()?;
        if words.len() != len.div_ceil(64) {
            return Err(Error::Corrupt("bit array length".into()));
        }
        Ok(BitArray::from_words(words, len))
    }
}

fn expect_len<T>(v: &[T], len: usize, what: &str) -> Result<()> {
    if v.len() == len {
        Ok(())
    } else {
        Err(Error::Corrupt(format!(
            "{what}: expected {len} entries, found {}",
            v.len()
        )))
    }
}

fn encode_text(t: &Text) -> Vec<u8> {
    let mut e = Encoder::default();
    e.bytes(t.as_bytes());
    e.0
}

fn decode_text(d: &mut Decoder) -> Result<Text> {
    Text::from_terminated(d.bytes()?)
}

fn encode_arrays(a: &SuffixArrays) -> Vec<u8> {
    let mut e = Encoder::default();
    for v in [&a.sa, &a.isa, &a.lcp, &a.plcp_pred, &a.plcp_succ] {
        e.u32s(v);
    }
    e.bytes(&a.bwt);
    e.0
}

fn decode_arrays(d: &mut Decoder) -> Result<SuffixArrays> {
    let a = SuffixArrays {
        sa: d.u32s()?,
        isa: d.u32s()?,
        lcp: d.u32s()?,
        plcp_pred: d.u32s()?,
        plcp_succ: d.u32s()?,
        bwt: d.bytes()?,
    };
    let n = a.sa.len();
    for v in [&a.isa, &a.lcp, &a.plcp_pred, &a.plcp_succ] {
        expect_len(v, n, "suffix arrays")?;
    }
    expect_len(&a.bwt, n, "bwt")?;
    if (0..n).any(|i| a.sa[i] as usize >= n || a.isa[a.sa[i] as usize] as usize != i) {
        return Err(Error::Corrupt("suffix array is not a permutation".into()));
    }
    Ok(a)
}

fn encode_irreducible(s: &IrreducibleStore) -> Vec<u8> {
    let (flags, first, offsets, lens, bits) = s.parts();
    let mut e = Encoder::default();
    e.bits(flags);
    e.u32(first);
    e.u64s(offsets);
    e.u32s(lens);
    e.bits(bits);
    e.0
}

fn decode_irreducible(d: &mut Decoder, dir: Direction, n: usize) -> Result<IrreducibleStore> {
    let flags = d.bits()?;
    let first = d.u32()?;
    let offsets = d.u64s()?;
    let lens = d.u32s()?;
    let bits = d.bits()?;
    expect_len(flags.words(), n.div_ceil(64), "irreducible flags")?;
    let count = flags.count_ones();
    expect_len(&offsets, count, "bit array offsets")?;
    expect_len(&lens, count, "irreducible lengths")?;
    if offsets
        .iter()
        .zip(&lens)
        .any(|(&o, &l)| o + l as u64 > bits.len() as u64)
    {
        return Err(Error::Corrupt("bit array extent".into()));
    }
    Ok(IrreducibleStore::from_parts(dir, flags, first, offsets, lens, bits))
}

fn encode_neighbours(t: &NeighbourTable) -> Vec<u8> {
    let (r, c) = t.parts();
    let mut e = Encoder::default();
    e.u32s(r);
    e.u32s(c);
    e.0
}

fn decode_neighbours(d: &mut Decoder, dir: Direction, n: usize) -> Result<NeighbourTable> {
    let (r, c) = (d.u32s()?, d.u32s()?);
    expect_len(&r, n, "neighbours")?;
    expect_len(&c, n, "overlaps")?;
    if r.iter().any(|&x| x as usize >= n) {
        return Err(Error::Corrupt("neighbour out of range".into()));
    }
    Ok(NeighbourTable::from_parts(dir, r, c))
}

fn encode_forest(f: &ITreeForest) -> Vec<u8> {
    let mut e = Encoder::default();
    for v in [
        &f.tree_of,
        &f.weight,
        &f.parent,
        &f.ordinal,
        &f.path_of,
        &f.tree_base,
        &f.tree_ell,
        &f.child_start,
        &f.root_children,
        &f.slots,
        &f.path_start,
        &f.path_nodes,
        &f.path_weights,
        &f.path_m,
        &f.path_sample,
        &f.block_start,
        &f.blocks,
        &f.top_start,
        &f.top_weights,
        &f.top_paths,
    ] {
        e.u32s(v);
    }
    e.u64(f.path_sampling.len() as u64);
    for &s in &f.path_sampling {
        e.u8(s as u8);
    }
    e.u64(f.samples.len() as u64);
    for s in &f.samples {
        e.bits(s.bits());
    }
    let s = &f.stats;
    for v in [
        s.trees,
        s.paths,
        s.sampled_paths,
        s.owned_root,
        s.owned_other,
        s.shared_root,
        s.shared_slot,
        s.slot_arrays,
        s.max_slots_per_tree,
        s.fallbacks,
        s.sample_bits,
        s.max_light_edges,
    ] {
        e.u64(v as u64);
    }
    e.0
}

fn decode_forest(d: &mut Decoder, dir: Direction, n: usize) -> Result<ITreeForest> {
    let mut v = || d.u32s();
    let mut f = ITreeForest {
        dir,
        tree_of: v()?,
        weight: v()?,
        parent: v()?,
        ordinal: v()?,
        path_of: v()?,
        tree_base: v()?,
        tree_ell: v()?,
        child_start: v()?,
        root_children: v()?,
        slots: v()?,
        path_start: v()?,
        path_nodes: v()?,
        path_weights: v()?,
        path_m: v()?,
        path_sample: v()?,
        block_start: v()?,
        blocks: v()?,
        top_start: v()?,
        top_weights: v()?,
        top_paths: v()?,
        path_sampling: Vec::new(),
        samples: Vec::new(),
        stats: ForestStats::default(),
    };
    let paths = d.count(1)?;
    f.path_sampling = (0..paths)
        .map(|_| Sampling::from_tag(d.u8()?).ok_or_else(|| Error::Corrupt("sampling tag".into())))
        .collect::<Result<_>>()?;
    let samples = d.count(16)?;
    f.samples = (0..samples)
        .map(|_| d.bits().map(RankedBits::new))
        .collect::<Result<_>>()?;
    let mut stat = || d.u64().map(|x| x as usize);
    f.stats = ForestStats {
        trees: stat()?,
        paths: stat()?,
        sampled_paths: stat()?,
        owned_root: stat()?,
        owned_other: stat()?,
        shared_root: stat()?,
        shared_slot: stat()?,
        slot_arrays: stat()?,
        max_slots_per_tree: stat()?,
        fallbacks: stat()?,
        sample_bits: stat()?,
        max_light_edges: stat()?,
    };
    validate_forest(&f, n)?;
    Ok(f)
}

/// Shape checks so that a well-formed but inconsistent file fails here and
/// not with an out-of-bounds panic at query time.
fn validate_forest(f: &ITreeForest, n: usize) -> Result<()> {
    for v in [
        &f.tree_of,
        &f.weight,
        &f.parent,
        &f.ordinal,
        &f.path_of,
        &f.path_nodes,
        &f.path_weights,
    ] {
        expect_len(v, n, "forest positions")?;
    }
    let (trees, paths) = (f.tree_base.len(), f.path_m.len());
    expect_len(&f.tree_ell, trees, "tree lengths")?;
    expect_len(&f.child_start, trees + 1, "root child offsets")?;
    expect_len(&f.slots, f.root_children.len(), "reuse slots")?;
    for v in [&f.path_start, &f.block_start, &f.top_start] {
        expect_len(v, paths + 1, "path offsets")?;
    }
    expect_len(&f.path_sample, paths, "path samples")?;
    expect_len(&f.path_sampling, paths, "sampling tags")?;
    expect_len(&f.top_paths, f.top_weights.len(), "top paths")?;
    let bad = |what: &str| Err(Error::Corrupt(format!("forest {what} out of range")));
    let below = |v: &[u32], cap: usize| v.iter().all(|&x| (x as usize) < cap);
    if !below(&f.tree_of, trees) || !below(&f.path_of, paths) || !below(&f.path_nodes, n) {
        return bad("ids");
    }
    if !below(&f.tree_base, n) || !below(&f.root_children, n) || !below(&f.top_paths, paths) {
        return bad("ids");
    }
    if f.parent.iter().any(|&p| p != NONE && p as usize >= n) {
        return bad("parents");
    }
    for offsets in [
        (&f.path_start, n),
        (&f.block_start, f.blocks.len()),
        (&f.top_start, f.top_weights.len()),
    ] {
        let (v, cap) = offsets;
        if v.windows(2).any(|w| w[0] > w[1]) || v.last().is_some_and(|&x| x as usize != cap) {
            return bad("offsets");
        }
    }
    if f.child_start.windows(2).any(|w| w[0] > w[1]) {
        return bad("offsets");
    }
    for h in 0..paths {
        let len = (f.path_start[h + 1] - f.path_start[h]) as usize;
        let sampled = f.path_sampling[h] != Sampling::None;
        if f.path_m[h] as usize > len || (sampled && f.path_sample[h] as usize >= f.samples.len()) {
            return bad("paths");
        }
    }
    if f.slots.iter().any(|&s| s != NONE && s as usize >= f.samples.len()) {
        return bad("slots");
    }
    Ok(())
}
