//! Query instrumentation. Query routines are generic over [`Probe`]; the
//! unit probe compiles to nothing.

pub trait Probe {
    /// Records `ops` primitive structure accesses.
    fn tick(&mut self, ops: usize);
    /// Records one rank query against a path's sampled weight array.
    fn sampled_rank(&mut self) {}
    /// Records which counting case resolved a query.
    fn case(&mut self, _case: QueryCase) {}
}

impl Probe for () {
    #[inline(always)]
    fn tick(&mut self, _ops: usize) {}
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QueryCase {
    /// The position itself is irreducible.
    Irreducible,
    /// Threshold within the overlap with the closest irreducible neighbour.
    Neighbour,
    /// Reduced to an earlier position through a weighted-ancestor query.
    Reduced,
    /// Threshold deeper than every branching node.
    Empty,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub ops: usize,
    pub sampled_ranks: usize,
    pub cases: [usize; 4],
}

impl OpCounter {
    pub fn reset(&mut self) {
        *self = OpCounter::default();
    }
}

impl Probe for OpCounter {
    #[inline]
    fn tick(&mut self, ops: usize) {
        self.ops += ops;
    }

    #[inline]
    fn sampled_rank(&mut self) {
        self.sampled_ranks += 1;
    }

    #[inline]
    fn case(&mut self, case: QueryCase) {
        self.cases[case as usize] += 1;
    }
}
