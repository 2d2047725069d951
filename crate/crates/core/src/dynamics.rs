//! Online insertion and deletion, keeping tree links, axis links and (in
//! ordinal mode) subtree counters consistent with each other.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::tree::{Cbst, Idx, Mode, Node, NodeClass, NodeRef};
use crate::Key;

/// Which shape of node a delete removed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeleteCase {
    Terminal,
    PartialKnot,
    /// Replaced by an axis neighbour of the given class.
    CompleteKnot {
        alternate: NodeClass,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DeleteStats {
    pub case: DeleteCase,
    /// Link fields written on surviving nodes (parent/left/right/prev/next),
    /// excluding the search descent and the tree's own root/head/tail handles.
    pub relinks: u32,
    /// lcount/rcount decrements. Always 0 in plain mode.
    pub counter_fixups: u32,
}

impl Cbst {
    /// Inserts `key` as a new terminal and splices it onto the axis next to
    /// its tree parent: before the parent when it became a left child, after
    /// it when a right child. No axis scan is needed.
    pub fn insert(&mut self, key: Key) -> Result<NodeRef> {
        let mut parent = None;
        let mut went_left = false;
        let mut cur = self.root;
        while let Some(c) = cur {
            let n = self.node(c);
            parent = Some(c);
            cur = match key.cmp(&n.key) {
                Ordering::Equal => return Err(Error::DuplicateKey(key)),
                Ordering::Less => {
                    went_left = true;
                    n.left
                }
                Ordering::Greater => {
                    went_left = false;
                    n.right
                }
            };
        }

        let i = self.alloc(Node {
            parent,
            ..Node::new(key)
        });
        match parent {
            None => {
                self.root = Some(i);
                self.head = Some(i);
                self.tail = Some(i);
            }
            Some(p) if went_left => {
                self.node_mut(p).left = Some(i);
                self.splice_before(p, i);
            }
            Some(p) => {
                self.node_mut(p).right = Some(i);
                self.splice_after(p, i);
            }
        }
        if self.mode() == Mode::Ordinal {
            self.adjust_path(i, 1);
        }
        self.size += 1;
        Ok(self.handle(i))
    }

    fn splice_before(&mut self, at: Idx, i: Idx) {
        let prev = self.node(at).prev;
        {
            let n = self.node_mut(i);
            n.prev = prev;
            n.next = Some(at);
        }
        self.node_mut(at).prev = Some(i);
        match prev {
            Some(p) => self.node_mut(p).next = Some(i),
            None => self.head = Some(i),
        }
    }

    fn splice_after(&mut self, at: Idx, i: Idx) {
        let next = self.node(at).next;
        {
            let n = self.node_mut(i);
            n.prev = Some(at);
            n.next = next;
        }
        self.node_mut(at).next = Some(i);
        match next {
            Some(s) => self.node_mut(s).prev = Some(i),
            None => self.tail = Some(i),
        }
    }

    /// Adds `delta` to the side counter of every ancestor of `i`, walking
    /// child to parent. Returns the number of counters touched.
    fn adjust_path(&mut self, mut i: Idx, delta: i32) -> u32 {
        let mut touched = 0;
        while let Some(p) = self.node(i).parent {
            let parent = self.node_mut(p);
            let counter = if parent.left == Some(i) {
                &mut parent.lcount
            } else {
                &mut parent.rcount
            };
            *counter = counter.wrapping_add_signed(delta);
            touched += 1;
            i = p;
        }
        touched
    }

    /// Points whatever referenced `old` as a child (or the root handle) at
    /// `new`. Returns the number of node link fields written.
    fn replace_child(&mut self, parent: Option<Idx>, old: Idx, new: Option<Idx>) -> u32 {
        match parent {
            None => {
                self.root = new;
                0
            }
            Some(p) => {
                let n = self.node_mut(p);
                if n.left == Some(old) {
                    n.left = new;
                } else {
                    debug_assert_eq!(n.right, Some(old));
                    n.right = new;
                }
                1
            }
        }
    }

    /// Replacement for a complete knot: its axis successor unless that is
    /// itself a complete knot, in which case its predecessor. Two axis
    /// neighbours are never both complete knots, so the result never is one.
    pub fn choose_alternate(&self, node: NodeRef) -> Result<NodeRef> {
        let i = self.resolve(node)?;
        self.alternate_of(i).map(|a| self.handle(a))
    }

    fn alternate_of(&self, i: Idx) -> Result<Idx> {
        let n = self.node(i);
        if n.class() != NodeClass::CompleteKnot {
            return Err(Error::NotCompleteKnot(n.key));
        }
        // a complete knot has both subtrees, so both axis neighbours exist
        let next = n.next.expect("complete knot has a successor");
        let prev = n.prev.expect("complete knot has a predecessor");
        if self.node(next).class() != NodeClass::CompleteKnot {
            Ok(next)
        } else {
            Ok(prev)
        }
    }

    /// Removes `key`. A complete knot is replaced by an axis neighbour, so
    /// the structural work is a bounded number of relinks regardless of
    /// tree size; ordinal mode additionally decrements counters along one
    /// root path.
    pub fn delete(&mut self, key: Key) -> Result<DeleteStats> {
        let d = self.descend(key).0.ok_or(Error::KeyNotFound(key))?;
        let ordinal = self.mode() == Mode::Ordinal;
        let Node {
            parent,
            left,
            right,
            prev,
            next,
            ..
        } = self.node(d).clone();

        let mut relinks = 0;
        let mut counter_fixups = 0;
        let case = match (left, right) {
            (Some(l), Some(r)) => {
                let a = self.alternate_of(d)?;
                let alternate = self.node(a).class();
                debug_assert_ne!(alternate, NodeClass::CompleteKnot);
                if ordinal {
                    counter_fixups += self.adjust_path(a, -1);
                }
                let Node {
                    parent: a_parent,
                    left: a_left,
                    right: a_right,
                    ..
                } = self.node(a).clone();

                if a_parent == Some(d) {
                    // a is d's direct child and keeps its own subtree on the
                    // far side; it adopts d's other child.
                    if a == r {
                        self.node_mut(a).left = Some(l);
                        self.node_mut(l).parent = Some(a);
                    } else {
                        self.node_mut(a).right = Some(r);
                        self.node_mut(r).parent = Some(a);
                    }
                    relinks += 2;
                } else {
                    // lift a's single child (if any) into a's place first
                    let a_child = a_left.or(a_right);
                    relinks += self.replace_child(a_parent, a, a_child);
                    if let Some(c) = a_child {
                        self.node_mut(c).parent = a_parent;
                        relinks += 1;
                    }
                    {
                        let an = self.node_mut(a);
                        an.left = Some(l);
                        an.right = Some(r);
                    }
                    self.node_mut(l).parent = Some(a);
                    self.node_mut(r).parent = Some(a);
                    relinks += 4;
                }
                self.node_mut(a).parent = parent;
                relinks += 1;
                relinks += self.replace_child(parent, d, Some(a));
                if ordinal {
                    // d's counters already exclude a
                    let d_now = self.node(d);
                    let (dl, dr) = (d_now.lcount, d_now.rcount);
                    let an = self.node_mut(a);
                    an.lcount = dl;
                    an.rcount = dr;
                }
                DeleteCase::CompleteKnot { alternate }
            }
            (child, other) => {
                let child = child.or(other);
                if ordinal {
                    counter_fixups += self.adjust_path(d, -1);
                }
                relinks += self.replace_child(parent, d, child);
                if let Some(c) = child {
                    self.node_mut(c).parent = parent;
                    relinks += 1;
                    DeleteCase::PartialKnot
                } else {
                    DeleteCase::Terminal
                }
            }
        };

        match prev {
            Some(p) => {
                self.node_mut(p).next = next;
                relinks += 1;
            }
            None => self.head = next,
        }
        match next {
            Some(s) => {
                self.node_mut(s).prev = prev;
                relinks += 1;
            }
            None => self.tail = prev,
        }

        self.release(d);
        self.size -= 1;
        Ok(DeleteStats {
            case,
            relinks,
            counter_fixups,
        })
    }
}
