//! A binary search tree whose nodes are also threaded, in key order, onto a
//! doubly linked axis.
//!
//! Every node of a [`Cbst`] lives in two structures at once: the tree (parent,
//! left and right links) and the axis (prev and next links). The axis always
//! equals the in-order traversal of the tree, which buys:
//!
//! - O(1) successor and predecessor by following a single link,
//! - deletion of a two-child node with a constant number of relinks, since the
//!   replacement is an axis neighbour,
//! - rank/select over stored subtree counters ([`Cbst::select`], [`Cbst::rank`]),
//! - a bottom-up bulk builder with depth exactly `floor(log2 n)`
//!   ([`Cbst::build_from_sorted`]),
//! - a linked merge sort over the same link discipline ([`cgsm`]),
//! - batch membership queries that co-walk the axis ([`batch`]) and the
//!   boundary formulas predicting when that beats per-key descent
//!   ([`boundary`]).

pub mod batch;
pub mod boundary;
pub mod cgsm;
mod dynamics;
mod error;
mod merge;
mod ordinal;
mod pyramid;
mod tree;
mod validate;

pub use batch::{Outcome, QueryMode, QueryReport};
pub use boundary::BoundaryParams;
pub use dynamics::{DeleteCase, DeleteStats};
pub use error::{Error, Result};
pub use merge::{merge_trees, MergeStats};
pub use ordinal::{FlexStep, SelectStep};
pub use pyramid::{plan_skeleton, BuildStats, Side, SkeletonPlan};
pub use tree::{Cbst, Descent, Mode, NodeClass, NodeRef, Probe};
pub use validate::{Check, CheckOutcome, Status, ValidationReport};

/// Ordering key. Keys within one [`Cbst`] are distinct.
pub type Key = i64;
