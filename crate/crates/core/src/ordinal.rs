//! Rank and select over the axis, computed by descending the tree.
//!
//! Each node carries a signed *flexion* and a unit *step*, both derived from
//! the stored subtree counters:
//!
//! | node        | flexion    | step |
//! |-------------|------------|------|
//! | root        | `+lcount`  | `+1` |
//! | left child  | `-rcount`  | `-1` |
//! | right child | `+lcount`  | `+1` |
//!
//! Summing `flexion + step` along a root-to-node path yields the node's
//! 1-based position on the axis.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::tree::{Cbst, Idx, NodeRef};
use crate::Key;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlexStep {
    pub flexion: i64,
    /// Either -1 or +1.
    pub step: i64,
}

impl FlexStep {
    pub fn delta(self) -> i64 {
        self.flexion + self.step
    }
}

/// One visited node of a select descent. `low..=high` is the range of axis
/// positions still possible on arrival at the node (its subtree's span).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SelectStep {
    pub node: NodeRef,
    pub total: usize,
    pub low: usize,
    pub high: usize,
}

impl Cbst {
    pub fn flex_step(&self, node: NodeRef) -> Result<FlexStep> {
        self.require_ordinal("flex_step")?;
        Ok(self.flex_of(self.resolve(node)?))
    }

    pub(crate) fn flex_of(&self, i: Idx) -> FlexStep {
        let n = self.node(i);
        match n.parent {
            Some(p) if self.node(p).left == Some(i) => FlexStep {
                flexion: -i64::from(n.rcount),
                step: -1,
            },
            _ => FlexStep {
                flexion: i64::from(n.lcount),
                step: 1,
            },
        }
    }

    /// Node at 1-based axis position `ordinal`. Visits at most
    /// `max_depth + 1` nodes.
    pub fn select(&self, ordinal: usize) -> Result<NodeRef> {
        let path = self.select_path(ordinal)?;
        Ok(path.last().expect("select visits the root").node)
    }

    /// The full descent of [`Cbst::select`], one entry per visited node.
    pub fn select_path(&self, ordinal: usize) -> Result<Vec<SelectStep>> {
        self.require_ordinal("select")?;
        if ordinal == 0 || ordinal > self.len() {
            return Err(Error::OutOfRange {
                ordinal,
                size: self.len(),
            });
        }
        let target = ordinal as i64;
        let mut path = Vec::new();
        let mut total = 0i64;
        let mut cur = self.root;
        while let Some(c) = cur {
            total += self.flex_of(c).delta();
            let n = self.node(c);
            let pos = total as usize;
            path.push(SelectStep {
                node: self.handle(c),
                total: pos,
                low: pos - n.lcount as usize,
                high: pos + n.rcount as usize,
            });
            cur = match total.cmp(&target) {
                Ordering::Equal => {
                    self.probe().visit(path.len() as u64);
                    return Ok(path);
                }
                Ordering::Greater => n.left,
                Ordering::Less => n.right,
            };
        }
        unreachable!("counters out of sync with structure")
    }

    /// 1-based axis position of `key`, by a root-to-node descent summing
    /// `flexion + step`.
    pub fn rank(&self, key: Key) -> Result<usize> {
        self.require_ordinal("rank")?;
        let mut total = 0i64;
        let mut visited = 0;
        let mut cur = self.root;
        while let Some(c) = cur {
            visited += 1;
            total += self.flex_of(c).delta();
            let n = self.node(c);
            cur = match key.cmp(&n.key) {
                Ordering::Equal => {
                    self.probe().visit(visited);
                    return Ok(total as usize);
                }
                Ordering::Less => n.left,
                Ordering::Greater => n.right,
            };
        }
        self.probe().visit(visited);
        Err(Error::KeyNotFound(key))
    }

    /// 1-based axis position of `node`, by walking child to parent: every
    /// ancestor reached from its right side contributes itself and its left
    /// subtree.
    pub fn rank_of(&self, node: NodeRef) -> Result<usize> {
        self.require_ordinal("rank_of")?;
        let mut child = self.resolve(node)?;
        let mut pos = self.node(child).lcount as usize + 1;
        while let Some(p) = self.node(child).parent {
            let parent = self.node(p);
            if parent.right == Some(child) {
                pos += parent.lcount as usize + 1;
            }
            child = p;
        }
        Ok(pos)
    }
}
