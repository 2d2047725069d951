//! Arena-backed node storage, handles and read-only navigation.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use crate::error::{Error, Result};
use crate::Key;

/// Raw arena index. Links between nodes are stored as these.
pub(crate) type Idx = u32;

/// Handle naming one node inside one [`Cbst`].
///
/// A handle stays valid until its node is deleted. Using it afterwards yields
/// [`Error::StaleHandle`], even if the slot has been reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodeRef {
    index: Idx,
    generation: u32,
}

/// Maintenance mode, fixed at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// No subtree counters. Deletion is a constant number of relinks; rank and
    /// select are unavailable.
    Plain,
    /// Subtree counters are kept exact. Insert and delete pay an O(depth)
    /// counter fixup.
    #[default]
    Ordinal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeClass {
    /// No children.
    Terminal,
    /// Exactly one child.
    PartialKnot,
    /// Two children.
    CompleteKnot,
}

#[derive(Debug, Clone)]
pub(crate) struct Node {
    pub(crate) key: Key,
    pub(crate) parent: Option<Idx>,
    pub(crate) left: Option<Idx>,
    pub(crate) right: Option<Idx>,
    pub(crate) prev: Option<Idx>,
    pub(crate) next: Option<Idx>,
    pub(crate) lcount: u32,
    pub(crate) rcount: u32,
}

impl Node {
    pub(crate) fn new(key: Key) -> Self {
        Node {
            key,
            parent: None,
            left: None,
            right: None,
            prev: None,
            next: None,
            lcount: 0,
            rcount: 0,
        }
    }

    pub(crate) fn class(&self) -> NodeClass {
        match (self.left, self.right) {
            (None, None) => NodeClass::Terminal,
            (Some(_), Some(_)) => NodeClass::CompleteKnot,
            _ => NodeClass::PartialKnot,
        }
    }
}

#[derive(Debug, Clone)]
struct Slot {
    generation: u32,
    node: Option<Node>,
}

/// Navigation counters, shared by readers.
///
/// `link_follows` counts axis links dereferenced by successor/predecessor;
/// `nodes_visited` counts nodes touched by search, select and rank.
#[derive(Debug, Default)]
pub struct Probe {
    link_follows: AtomicU64,
    nodes_visited: AtomicU64,
}

impl Probe {
    pub fn link_follows(&self) -> u64 {
        self.link_follows.load(AtomicOrdering::Relaxed)
    }

    pub fn nodes_visited(&self) -> u64 {
        self.nodes_visited.load(AtomicOrdering::Relaxed)
    }

    pub fn reset(&self) {
        self.link_follows.store(0, AtomicOrdering::Relaxed);
        self.nodes_visited.store(0, AtomicOrdering::Relaxed);
    }

    pub(crate) fn follow(&self, n: u64) {
        self.link_follows.fetch_add(n, AtomicOrdering::Relaxed);
    }

    pub(crate) fn visit(&self, n: u64) {
        self.nodes_visited.fetch_add(n, AtomicOrdering::Relaxed);
    }
}

impl Clone for Probe {
    fn clone(&self) -> Self {
        Probe {
            link_follows: AtomicU64::new(self.link_follows()),
            nodes_visited: AtomicU64::new(self.nodes_visited()),
        }
    }
}

/// Cost of one root-to-leaf descent.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Descent {
    pub comparisons: u64,
    pub visited: u64,
}

/// Compound binary search tree: a BST whose nodes are also threaded onto a
/// key-sorted doubly linked axis.
#[derive(Debug, Clone)]
pub struct Cbst {
    slots: Vec<Slot>,
    free: Vec<Idx>,
    pub(crate) root: Option<Idx>,
    pub(crate) head: Option<Idx>,
    pub(crate) tail: Option<Idx>,
    pub(crate) size: usize,
    mode: Mode,
    probe: Probe,
}

impl Default for Cbst {
    fn default() -> Self {
        Cbst::new(Mode::default())
    }
}

impl Cbst {
    pub fn new(mode: Mode) -> Self {
        Cbst {
            slots: Vec::new(),
            free: Vec::new(),
            root: None,
            head: None,
            tail: None,
            size: 0,
            mode,
            probe: Probe::default(),
        }
    }

    /// Empty tree in ordinal mode.
    pub fn new_empty() -> Self {
        Cbst::default()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn probe(&self) -> &Probe {
        &self.probe
    }

    // ---- arena plumbing -------------------------------------------------

    pub(crate) fn node(&self, i: Idx) -> &Node {
        self.slots[i as usize]
            .node
            .as_ref()
            .expect("link to a freed slot")
    }

    pub(crate) fn node_mut(&mut self, i: Idx) -> &mut Node {
        self.slots[i as usize]
            .node
            .as_mut()
            .expect("link to a freed slot")
    }

    pub(crate) fn try_node(&self, i: Idx) -> Option<&Node> {
        self.slots.get(i as usize).and_then(|s| s.node.as_ref())
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.slots.len()
    }

    pub(crate) fn live_count(&self) -> usize {
        self.slots.len() - self.free.len()
    }

    pub(crate) fn alloc(&mut self, node: Node) -> Idx {
        if let Some(i) = self.free.pop() {
            let slot = &mut self.slots[i as usize];
            debug_assert!(slot.node.is_none());
            slot.node = Some(node);
            return i;
        }
        let i = Idx::try_from(self.slots.len()).expect("arena exceeds u32 indices");
        self.slots.push(Slot {
            generation: 0,
            node: Some(node),
        });
        i
    }

    pub(crate) fn release(&mut self, i: Idx) {
        let slot = &mut self.slots[i as usize];
        slot.node = None;
        slot.generation = slot.generation.wrapping_add(1);
        self.free.push(i);
    }

    pub(crate) fn resolve(&self, r: NodeRef) -> Result<Idx> {
        match self.slots.get(r.index as usize) {
            Some(slot) if slot.generation == r.generation && slot.node.is_some() => Ok(r.index),
            _ => Err(Error::StaleHandle),
        }
    }

    pub(crate) fn handle(&self, i: Idx) -> NodeRef {
        NodeRef {
            index: i,
            generation: self.slots[i as usize].generation,
        }
    }

    /// Moves every slot of `other` into this arena, rebasing its links.
    /// Root, axis ends and size of `self` are left for the caller to fix.
    pub(crate) fn absorb(&mut self, other: Cbst) -> Idx {
        let offset = Idx::try_from(self.slots.len()).expect("arena exceeds u32 indices");
        let shift = |l: Option<Idx>| l.map(|i| i + offset);
        for slot in other.slots {
            let node = slot.node.map(|n| Node {
                prev: shift(n.prev),
                next: shift(n.next),
                parent: shift(n.parent),
                left: shift(n.left),
                right: shift(n.right),
                ..n
            });
            self.slots.push(Slot {
                generation: slot.generation,
                node,
            });
        }
        self.free.extend(other.free.into_iter().map(|i| i + offset));
        offset
    }

    // ---- handles --------------------------------------------------------

    pub fn root(&self) -> Option<NodeRef> {
        self.root.map(|i| self.handle(i))
    }

    /// Minimum-key node: the first node on the axis.
    pub fn head(&self) -> Option<NodeRef> {
        self.head.map(|i| self.handle(i))
    }

    /// Maximum-key node: the last node on the axis.
    pub fn tail(&self) -> Option<NodeRef> {
        self.tail.map(|i| self.handle(i))
    }

    pub fn key(&self, node: NodeRef) -> Result<Key> {
        Ok(self.node(self.resolve(node)?).key)
    }

    pub fn parent(&self, node: NodeRef) -> Result<Option<NodeRef>> {
        let i = self.resolve(node)?;
        Ok(self.node(i).parent.map(|p| self.handle(p)))
    }

    pub fn left(&self, node: NodeRef) -> Result<Option<NodeRef>> {
        let i = self.resolve(node)?;
        Ok(self.node(i).left.map(|p| self.handle(p)))
    }

    pub fn right(&self, node: NodeRef) -> Result<Option<NodeRef>> {
        let i = self.resolve(node)?;
        Ok(self.node(i).right.map(|p| self.handle(p)))
    }

    /// Stored `(lcount, rcount)`: sizes of the left and right subtrees.
    /// Only maintained in [`Mode::Ordinal`].
    pub fn counts(&self, node: NodeRef) -> Result<(usize, usize)> {
        let n = self.node(self.resolve(node)?);
        Ok((n.lcount as usize, n.rcount as usize))
    }

    // ---- navigation -----------------------------------------------------

    /// Node holding `key`, if any.
    pub fn search(&self, key: Key) -> Option<NodeRef> {
        self.search_traced(key).0
    }

    pub fn contains(&self, key: Key) -> bool {
        self.search(key).is_some()
    }

    /// Search that also reports its descent cost. Visits at most
    /// `max_depth + 1` nodes.
    pub fn search_traced(&self, key: Key) -> (Option<NodeRef>, Descent) {
        let (found, descent) = self.descend(key);
        self.probe.visit(descent.visited);
        (found.map(|i| self.handle(i)), descent)
    }

    pub(crate) fn descend(&self, key: Key) -> (Option<Idx>, Descent) {
        let mut descent = Descent::default();
        let mut cur = self.root;
        while let Some(c) = cur {
            let n = self.node(c);
            descent.visited += 1;
            descent.comparisons += 1;
            cur = match key.cmp(&n.key) {
                Ordering::Equal => return (Some(c), descent),
                Ordering::Less => n.left,
                Ordering::Greater => n.right,
            };
        }
        (None, descent)
    }

    /// Next node on the axis. One link follow, no tree descent.
    pub fn successor(&self, node: NodeRef) -> Result<Option<NodeRef>> {
        let i = self.resolve(node)?;
        self.probe.follow(1);
        Ok(self.node(i).next.map(|n| self.handle(n)))
    }

    /// Previous node on the axis. One link follow, no tree descent.
    pub fn predecessor(&self, node: NodeRef) -> Result<Option<NodeRef>> {
        let i = self.resolve(node)?;
        self.probe.follow(1);
        Ok(self.node(i).prev.map(|n| self.handle(n)))
    }

    pub fn classify(&self, node: NodeRef) -> Result<NodeClass> {
        Ok(self.node(self.resolve(node)?).class())
    }

    /// Number of links between `node` and the root (root has depth 0).
    pub fn depth_of(&self, node: NodeRef) -> Result<usize> {
        Ok(self.depth_idx(self.resolve(node)?))
    }

    pub(crate) fn depth_idx(&self, mut i: Idx) -> usize {
        let mut depth = 0;
        while let Some(p) = self.node(i).parent {
            depth += 1;
            i = p;
        }
        depth
    }

    /// Greatest node depth, or `None` for an empty tree.
    pub fn max_depth(&self) -> Option<usize> {
        let root = self.root?;
        let mut deepest = 0;
        let mut stack = vec![(root, 0usize)];
        while let Some((i, d)) = stack.pop() {
            deepest = deepest.max(d);
            let n = self.node(i);
            stack.extend(n.left.map(|c| (c, d + 1)));
            stack.extend(n.right.map(|c| (c, d + 1)));
        }
        Some(deepest)
    }

    /// Keys in ascending order, read off the axis.
    pub fn in_order(&self) -> Vec<Key> {
        self.iter().collect()
    }

    /// Iterator over keys along the axis.
    pub fn iter(&self) -> Keys<'_> {
        Keys {
            tree: self,
            cur: self.head,
        }
    }

    pub(crate) fn require_ordinal(&self, op: &'static str) -> Result<()> {
        match self.mode {
            Mode::Ordinal => Ok(()),
            Mode::Plain => Err(Error::ModeError(op)),
        }
    }
}

pub struct Keys<'a> {
    tree: &'a Cbst,
    cur: Option<Idx>,
}

impl Iterator for Keys<'_> {
    type Item = Key;

    fn next(&mut self) -> Option<Key> {
        let n = self.tree.node(self.cur?);
        self.cur = n.next;
        Some(n.key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pyramid7() -> Cbst {
        Cbst::build_from_sorted(&[1, 2, 3, 4, 5, 6, 7], Mode::Ordinal).unwrap()
    }

    #[test]
    fn empty_tree() {
        let t = Cbst::new_empty();
        assert_eq!(t.len(), 0);
        assert!(t.root().is_none() && t.head().is_none() && t.tail().is_none());
        assert!(t.search(3).is_none());
        assert_eq!(t.max_depth(), None);
        assert!(t.in_order().is_empty());
        assert!(t.validate().is_valid());
    }

    #[test]
    fn singleton_insert() {
        let mut t = Cbst::new_empty();
        t.insert(5).unwrap();
        let root = t.root().unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.key(root).unwrap(), 5);
        assert_eq!(t.head(), Some(root));
        assert_eq!(t.tail(), Some(root));
    }

    #[test]
    fn search_descent_lengths() {
        let t = pyramid7();
        let (hit, d) = t.search_traced(3);
        assert_eq!(t.key(hit.unwrap()).unwrap(), 3);
        assert_eq!(d.visited, 3);
        let (miss, d) = t.search_traced(8);
        assert!(miss.is_none());
        assert_eq!(d.visited, 3);
    }

    #[test]
    fn successor_and_predecessor_follow_one_link() {
        let t = pyramid7();
        let four = t.search(4).unwrap();
        t.probe().reset();
        assert_eq!(t.key(t.successor(four).unwrap().unwrap()).unwrap(), 5);
        assert_eq!(t.probe().link_follows(), 1);
        assert_eq!(t.key(t.predecessor(four).unwrap().unwrap()).unwrap(), 3);
        assert_eq!(t.probe().link_follows(), 2);
        assert_eq!(t.successor(t.tail().unwrap()).unwrap(), None);
        assert_eq!(t.predecessor(t.head().unwrap()).unwrap(), None);
    }

    #[test]
    fn stale_handle_is_an_error() {
        let mut t = pyramid7();
        let five = t.search(5).unwrap();
        t.delete(5).unwrap();
        assert_eq!(t.successor(five), Err(Error::StaleHandle));
        assert_eq!(t.classify(five), Err(Error::StaleHandle));
        assert_eq!(t.depth_of(five), Err(Error::StaleHandle));
        // slot reuse does not revive the old handle
        t.insert(5).unwrap();
        assert_eq!(t.key(five), Err(Error::StaleHandle));
    }

    #[test]
    fn classes_and_depths() {
        let t = pyramid7();
        let root = t.root().unwrap();
        assert_eq!(t.classify(root).unwrap(), NodeClass::CompleteKnot);
        assert_eq!(
            t.classify(t.search(7).unwrap()).unwrap(),
            NodeClass::Terminal
        );
        assert_eq!(t.depth_of(root).unwrap(), 0);
        assert_eq!(t.depth_of(t.search(1).unwrap()).unwrap(), 2);
        assert_eq!(t.max_depth(), Some(2));

        let mut two = Cbst::new_empty();
        two.insert(1).unwrap();
        two.insert(2).unwrap();
        let one = two.search(1).unwrap();
        assert_eq!(two.classify(one).unwrap(), NodeClass::PartialKnot);
    }

    #[test]
    fn axis_after_updates() {
        let mut t = pyramid7();
        t.delete(5).unwrap();
        let four = t.search(4).unwrap();
        assert_eq!(t.key(t.successor(four).unwrap().unwrap()).unwrap(), 6);
        t.insert(0).unwrap();
        let one = t.search(1).unwrap();
        assert_eq!(t.key(t.predecessor(one).unwrap().unwrap()).unwrap(), 0);
        let mut u = pyramid7();
        u.delete(4).unwrap();
        assert_eq!(u.in_order(), vec![1, 2, 3, 5, 6, 7]);
    }
}
