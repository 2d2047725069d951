//! Merging several trees into one by their axes.

use crate::cgsm::{merge_rounds, Link, Links, MergeCounters, Span};
use crate::error::{Error, Result};
use crate::tree::{Cbst, Mode};
use crate::Key;

impl Links for Cbst {
    fn key(&self, i: Link) -> Key {
        self.node(i).key
    }
    fn prev(&self, i: Link) -> Option<Link> {
        self.node(i).prev
    }
    fn next(&self, i: Link) -> Option<Link> {
        self.node(i).next
    }
    fn set_prev(&mut self, i: Link, to: Option<Link>) {
        self.node_mut(i).prev = to;
    }
    fn set_next(&mut self, i: Link, to: Option<Link>) {
        self.node_mut(i).next = to;
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeStats {
    /// Comparisons made merging the axes.
    pub comparisons: u64,
    /// Comparisons made checking the merged axis for keys shared by trees.
    pub scan_comparisons: u64,
    pub rounds: u32,
    /// Link writes of the final rebuild.
    pub build_writes: u64,
}

/// Merges trees with pairwise disjoint keys. Each tree's axis is already a
/// sorted chain, so the axes are merged in pairwise rounds and the result
/// rebuilt as a pyramid: `O(n log k + n)` for `k` trees. Nodes are relinked
/// in place, not copied.
///
/// The result takes the mode of the first tree (ordinal for an empty list).
pub fn merge_trees(trees: Vec<Cbst>) -> Result<(Cbst, MergeStats)> {
    let mut trees = trees.into_iter();
    let Some(mut merged) = trees.next() else {
        return Ok((Cbst::new(Mode::Ordinal), MergeStats::default()));
    };
    let span_of = |t: &Cbst, offset: Link| match (t.head, t.tail) {
        (Some(h), Some(l)) => Some(Span {
            head: h + offset,
            tail: l + offset,
            len: t.len(),
        }),
        _ => None,
    };
    let mut table: Vec<Span> = span_of(&merged, 0).into_iter().collect();
    for tree in trees {
        let span = span_of(&tree, 0);
        let offset = merged.absorb(tree);
        table.extend(span.map(|s| Span {
            head: s.head + offset,
            tail: s.tail + offset,
            len: s.len,
        }));
    }

    let mut counters = MergeCounters::default();
    let (span, rounds) = merge_rounds(&mut merged, table, &mut counters);
    let mut stats = MergeStats {
        comparisons: counters.comparisons,
        rounds,
        ..MergeStats::default()
    };

    let mut order: Vec<Link> = Vec::with_capacity(span.map_or(0, |s| s.len));
    let mut cur = span.map(|s| s.head);
    while let Some(i) = cur {
        let node = merged.node(i);
        if let Some(&p) = order.last() {
            stats.scan_comparisons += 1;
            if merged.node(p).key == node.key {
                return Err(Error::DuplicateAcrossTrees(node.key));
            }
        }
        order.push(i);
        cur = node.next;
    }
    stats.build_writes = merged.wire_pyramid(&order).link_writes;
    Ok((merged, stats))
}
