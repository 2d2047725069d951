//! Bottom-up bulk build ("pyramid") of a tree with depth `floor(log2 n)`.
//!
//! Positions are 1-based along the sorted input. Round `v` (v >= 1) takes the
//! positions whose largest power-of-two divisor is `2^v`, i.e. `2^v`,
//! `3*2^v`, `5*2^v`, ... (offset `2^(v+1)`), and links each to the children
//! at distance `2^(v-1)` on either side. For `n = 2^k - 1` that is the whole
//! story; otherwise a right child that would fall past `n` is replaced by the
//! position in `(p, n]` with the largest power-of-two divisor, which places
//! the overplus on the bottom level without extra rounds.

use crate::error::{Error, Result};
use crate::tree::{Cbst, Idx, Mode, Node};
use crate::Key;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Parent/child assignment for positions `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkeletonPlan {
    n: usize,
    root: Option<usize>,
    parent: Vec<Option<usize>>,
    side: Vec<Option<Side>>,
    children: Vec<(Option<usize>, Option<usize>)>,
}

impl SkeletonPlan {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn root(&self) -> Option<usize> {
        self.root
    }

    pub fn parent_of(&self, p: usize) -> Option<usize> {
        self.parent[p - 1]
    }

    pub fn side_of(&self, p: usize) -> Option<Side> {
        self.side[p - 1]
    }

    pub fn children_of(&self, p: usize) -> (Option<usize>, Option<usize>) {
        self.children[p - 1]
    }

    /// Number of links from the root to `p`.
    pub fn depth_of(&self, mut p: usize) -> usize {
        let mut d = 0;
        while let Some(q) = self.parent_of(p) {
            d += 1;
            p = q;
        }
        d
    }

    /// Parent positions of round `v` (v >= 1), in axis order.
    pub fn round(&self, v: u32) -> Vec<usize> {
        round_positions(self.n, v).collect()
    }

    /// Number of parent rounds: `floor(log2 n)`, or 0 for `n <= 1`.
    pub fn rounds(&self) -> u32 {
        top_valuation(self.n)
    }
}

/// Largest `v` with `2^v <= n`.
fn top_valuation(n: usize) -> u32 {
    if n == 0 {
        0
    } else {
        usize::BITS - 1 - n.leading_zeros()
    }
}

fn round_positions(n: usize, v: u32) -> impl Iterator<Item = usize> {
    let start = 1usize << v;
    (start..=n).step_by(start << 1)
}

/// Children of position `p` among `1..=n`.
fn children(p: usize, n: usize) -> (Option<usize>, Option<usize>) {
    let v = p.trailing_zeros();
    if v == 0 {
        return (None, None);
    }
    let width = 1usize << (v - 1);
    let left = p - width;
    let right = if p + width <= n {
        Some(p + width)
    } else if p < n {
        Some(densest_in(p, n))
    } else {
        None
    };
    (Some(left), right)
}

/// The position in `(low, high]` divisible by the largest power of two.
fn densest_in(low: usize, high: usize) -> usize {
    debug_assert!(low < high);
    let bit = usize::BITS - 1 - (low ^ high).leading_zeros();
    (high >> bit) << bit
}

pub fn plan_skeleton(n: usize) -> SkeletonPlan {
    let mut plan = SkeletonPlan {
        n,
        root: (n > 0).then(|| 1usize << top_valuation(n)),
        parent: vec![None; n],
        side: vec![None; n],
        children: vec![(None, None); n],
    };
    for v in 1..=top_valuation(n) {
        for p in round_positions(n, v) {
            let (l, r) = children(p, n);
            plan.children[p - 1] = (l, r);
            for (c, side) in [(l, Side::Left), (r, Side::Right)] {
                if let Some(c) = c {
                    plan.parent[c - 1] = Some(p);
                    plan.side[c - 1] = Some(side);
                }
            }
        }
    }
    plan
}

/// Work done by one bulk build.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BuildStats {
    /// Link fields written (tree and axis).
    pub link_writes: u64,
    /// Parent rounds executed.
    pub rounds: u32,
}

impl Cbst {
    /// Builds a tree of depth `floor(log2 n)` over strictly ascending `keys`.
    pub fn build_from_sorted(keys: &[Key], mode: Mode) -> Result<Cbst> {
        Self::build_from_sorted_traced(keys, mode).map(|(t, _)| t)
    }

    pub fn build_from_sorted_traced(keys: &[Key], mode: Mode) -> Result<(Cbst, BuildStats)> {
        for (i, w) in keys.windows(2).enumerate() {
            if w[0] == w[1] {
                return Err(Error::DuplicateKey(w[1]));
            }
            if w[0] > w[1] {
                return Err(Error::NotSorted { index: i + 1 });
            }
        }
        let mut tree = Cbst::new(mode);
        let order: Vec<Idx> = keys.iter().map(|&k| tree.alloc(Node::new(k))).collect();
        let stats = tree.wire_pyramid(&order);
        Ok((tree, stats))
    }

    /// Rewires the live nodes `order` (already in ascending key order) into a
    /// pyramid, resetting axis, tree links, counters, root and size.
    pub(crate) fn wire_pyramid(&mut self, order: &[Idx]) -> BuildStats {
        let n = order.len();
        let mut stats = BuildStats::default();
        let ordinal = self.mode() == Mode::Ordinal;

        // axis in input order; every node starts as a parentless terminal
        for (k, &i) in order.iter().enumerate() {
            let prev = k.checked_sub(1).map(|j| order[j]);
            let next = order.get(k + 1).copied();
            let node = self.node_mut(i);
            node.prev = prev;
            node.next = next;
            node.parent = None;
            node.left = None;
            node.right = None;
            node.lcount = 0;
            node.rcount = 0;
            stats.link_writes += 2;
        }

        let at = |p: usize| order[p - 1];
        for v in 1..=top_valuation(n) {
            stats.rounds += 1;
            for p in round_positions(n, v) {
                let parent = at(p);
                let (l, r) = children(p, n);
                let mut sizes = [0u32; 2];
                for (slot, c) in [l, r].into_iter().enumerate() {
                    let Some(c) = c else { continue };
                    let child = at(c);
                    let cn = self.node_mut(child);
                    cn.parent = Some(parent);
                    sizes[slot] = cn.lcount + cn.rcount + 1;
                    let pn = self.node_mut(parent);
                    if slot == 0 {
                        pn.left = Some(child);
                    } else {
                        pn.right = Some(child);
                    }
                    stats.link_writes += 2;
                }
                let pn = self.node_mut(parent);
                pn.lcount = sizes[0];
                pn.rcount = sizes[1];
            }
        }
        if !ordinal {
            // counters above were only scratch space for child sizes
            for &i in order {
                let node = self.node_mut(i);
                node.lcount = 0;
                node.rcount = 0;
            }
        }

        self.root = (n > 0).then(|| at(1 << top_valuation(n)));
        self.head = order.first().copied();
        self.tail = order.last().copied();
        self.size = n;
        stats
    }

    /// For every node, the leftmost node of its right subtree holds a larger
    /// key and the rightmost node of its left subtree a smaller one.
    /// Equivalent to BST order holding everywhere.
    pub fn no_foul_check(&self) -> bool {
        let Some(root) = self.root else { return true };
        let mut stack = vec![root];
        let mut seen = 0usize;
        while let Some(i) = stack.pop() {
            seen += 1;
            if seen > self.slot_count() {
                return false;
            }
            let n = self.node(i);
            if let Some(r) = n.right {
                let mut c = r;
                while let Some(l) = self.node(c).left {
                    c = l;
                }
                if self.node(c).key <= n.key {
                    return false;
                }
                stack.push(r);
            }
            if let Some(l) = n.left {
                let mut c = l;
                while let Some(r) = self.node(c).right {
                    c = r;
                }
                if self.node(c).key >= n.key {
                    return false;
                }
                stack.push(l);
            }
        }
        true
    }
}
