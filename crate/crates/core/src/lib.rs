//! Constant-time suffix-tree locus queries.
//!
//! [`build_index`] preprocesses a text; [`LocusIndex::locus`] then returns
//! the suffix-tree node of any substring `s[p..=q]` in constant time, using
//! per-direction branching counts answered from irreducible LCP values and
//! weighted-ancestor queries on small trees.

pub mod bits;
pub mod direction;
pub mod error;
pub mod irreducible;
pub mod itree;
pub mod locus;
pub mod neighbours;
pub mod oracle;
pub mod persist;
pub mod probe;
pub mod text;
pub mod tree;

pub use direction::Direction;
pub use error::{Error, Result};
pub use locus::{build_index, IndexOptions, IndexStats, LocusIndex};
pub use probe::{OpCounter, Probe};
pub use tree::NodeId;
