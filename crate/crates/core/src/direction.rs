//! Left/right orientation of the lexicographic order.
//!
//! Everything direction-dependent is written once against [`DirView`]: the
//! right direction is the left one run over the reversed suffix array, so
//! "rank 0" is the lexicographically largest suffix and the "previous" suffix
//! is the lexicographic successor.

use crate::text::SuffixArrays;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::Left, Direction::Right];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Direction::Left => "left",
            Direction::Right => "right",
        }
    }
}

impl std::str::FromStr for Direction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "left" | "l" => Ok(Direction::Left),
            "right" | "r" => Ok(Direction::Right),
            _ => Err(format!("unknown direction {s:?} (expected left or right)")),
        }
    }
}

/// The suffix arrays seen in one direction's order.
#[derive(Clone, Copy)]
pub struct DirView<'a> {
    arrays: &'a SuffixArrays,
    dir: Direction,
}

impl<'a> DirView<'a> {
    pub fn new(arrays: &'a SuffixArrays, dir: Direction) -> Self {
        DirView { arrays, dir }
    }

    #[inline]
    pub fn dir(&self) -> Direction {
        self.dir
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.arrays.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.arrays.is_empty()
    }

    /// Converts between lexicographic ranks and ranks in this direction.
    #[inline]
    pub fn flip(&self, i: usize) -> usize {
        match self.dir {
            Direction::Left => i,
            Direction::Right => self.len() - 1 - i,
        }
    }

    #[inline]
    pub fn rank(&self, p: usize) -> usize {
        self.flip(self.arrays.isa[p] as usize)
    }

    #[inline]
    pub fn pos_at(&self, i: usize) -> usize {
        self.arrays.sa[self.flip(i)] as usize
    }

    /// Common prefix between the suffixes at directional ranks `i - 1` and `i`.
    #[inline]
    pub fn lcp_at(&self, i: usize) -> usize {
        match self.dir {
            Direction::Left => self.arrays.lcp[i] as usize,
            Direction::Right if i == 0 => 0,
            Direction::Right => self.arrays.lcp[self.len() - i] as usize,
        }
    }

    #[inline]
    pub fn bwt_at(&self, i: usize) -> u8 {
        self.arrays.bwt[self.flip(i)]
    }

    /// First rank of a BWT run in this direction.
    #[inline]
    pub fn is_run_head(&self, i: usize) -> bool {
        i == 0 || self.bwt_at(i - 1) != self.bwt_at(i)
    }

    /// `ℓ_p`: common prefix of suffix `p` with its directional predecessor.
    #[inline]
    pub fn ell(&self, p: usize) -> usize {
        match self.dir {
            Direction::Left => self.arrays.plcp_pred[p] as usize,
            Direction::Right => self.arrays.plcp_succ[p] as usize,
        }
    }
}
