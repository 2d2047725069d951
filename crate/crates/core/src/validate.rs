//! Structural checks for every invariant tying the tree to its axis.

use std::fmt;

use crate::tree::{Cbst, Idx, Mode, NodeClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Check {
    /// (a) keys ordered across every subtree, parent links consistent.
    BstOrder,
    /// (b) axis keys strictly ascending, prev/next mutually consistent.
    AxisAscending,
    /// (c) axis visits exactly the in-order sequence of tree nodes.
    AxisMatchesInOrder,
    /// (d) stored lcount/rcount equal recounted subtree sizes.
    Counters,
    /// (e) axis-adjacent nodes never share a depth.
    AdjacentDepthsDiffer,
    /// (f) of two axis-adjacent nodes the shallower is an ancestor of the deeper.
    AdjacentAncestry,
    /// (g) axis-adjacent nodes are never both complete knots nor both terminals.
    AdjacentClasses,
    /// (h) size, node counts and axis ends agree.
    Size,
}

impl Check {
    pub const ALL: [Check; 8] = [
        Check::BstOrder,
        Check::AxisAscending,
        Check::AxisMatchesInOrder,
        Check::Counters,
        Check::AdjacentDepthsDiffer,
        Check::AdjacentAncestry,
        Check::AdjacentClasses,
        Check::Size,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Check::BstOrder => "bst-order",
            Check::AxisAscending => "axis-ascending",
            Check::AxisMatchesInOrder => "axis-matches-in-order",
            Check::Counters => "counters",
            Check::AdjacentDepthsDiffer => "adjacent-depths-differ",
            Check::AdjacentAncestry => "adjacent-ancestry",
            Check::AdjacentClasses => "adjacent-classes",
            Check::Size => "size",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail(String),
    /// Not applicable, e.g. counters on a plain-mode tree.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckOutcome {
    pub check: Check,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    outcomes: Vec<CheckOutcome>,
}

impl ValidationReport {
    pub fn outcomes(&self) -> &[CheckOutcome] {
        &self.outcomes
    }

    /// True when no check failed. Skipped checks count as passing.
    pub fn is_valid(&self) -> bool {
        self.outcomes
            .iter()
            .all(|o| !matches!(o.status, Status::Fail(_)))
    }

    pub fn status(&self, check: Check) -> &Status {
        &self
            .outcomes
            .iter()
            .find(|o| o.check == check)
            .expect("every check is reported")
            .status
    }

    pub fn passed(&self, check: Check) -> bool {
        !matches!(self.status(check), Status::Fail(_))
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.outcomes
            .iter()
            .filter(|o| matches!(o.status, Status::Fail(_)))
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for o in &self.outcomes {
            match &o.status {
                Status::Pass => writeln!(f, "{:<24} pass", o.check.label())?,
                Status::Skipped => writeln!(f, "{:<24} skipped", o.check.label())?,
                Status::Fail(why) => writeln!(f, "{:<24} FAIL {why}", o.check.label())?,
            }
        }
        Ok(())
    }
}

struct Findings {
    outcomes: Vec<CheckOutcome>,
}

impl Findings {
    fn record(&mut self, check: Check, failure: Option<String>) {
        let status = match failure {
            None => Status::Pass,
            Some(why) => Status::Fail(why),
        };
        self.outcomes.push(CheckOutcome { check, status });
    }

    fn skip(&mut self, check: Check) {
        self.outcomes.push(CheckOutcome {
            check,
            status: Status::Skipped,
        });
    }
}

/// Tree-side facts gathered in one traversal. All walks are bounded by the
/// slot count so a corrupted (cyclic) structure still terminates.
struct TreeScan {
    in_order: Vec<Idx>,
    depth: Vec<Option<u32>>,
    broken: Option<String>,
}

impl Cbst {
    /// Runs every structural check and reports each one separately. Never
    /// panics on a corrupted structure.
    pub fn validate(&self) -> ValidationReport {
        let mut findings = Findings {
            outcomes: Vec::with_capacity(Check::ALL.len()),
        };
        let scan = self.scan_tree();
        let axis = self.scan_axis();

        // (a)
        let order_failure = scan.broken.clone().or_else(|| {
            scan.in_order.windows(2).find_map(|w| {
                let (a, b) = (self.node(w[0]).key, self.node(w[1]).key);
                (a >= b).then(|| format!("in-order keys {a} then {b}"))
            })
        });
        findings.record(Check::BstOrder, order_failure);

        // (b)
        findings.record(Check::AxisAscending, axis.as_ref().err().cloned());
        let axis = axis.unwrap_or_default();

        // (c)
        let matches = if axis == scan.in_order {
            None
        } else {
            Some(format!(
                "axis has {} nodes, in-order traversal {}; sequences differ",
                axis.len(),
                scan.in_order.len()
            ))
        };
        findings.record(Check::AxisMatchesInOrder, matches);

        // (d)
        match self.mode() {
            Mode::Plain => findings.skip(Check::Counters),
            Mode::Ordinal => findings.record(Check::Counters, self.check_counters(&scan)),
        }

        // (e), (f), (g) over axis-adjacent pairs
        let mut same_depth = None;
        let mut ancestry = None;
        let mut classes = None;
        for w in axis.windows(2) {
            let (a, b) = (w[0], w[1]);
            let (ka, kb) = (self.node(a).key, self.node(b).key);
            let (Some(da), Some(db)) = (scan.depth[a as usize], scan.depth[b as usize]) else {
                same_depth.get_or_insert_with(|| format!("{ka} or {kb} not reachable from root"));
                continue;
            };
            if da == db {
                same_depth.get_or_insert_with(|| format!("{ka} and {kb} both at depth {da}"));
            } else {
                let (shallow, deep, gap) = if da < db {
                    (a, b, db - da)
                } else {
                    (b, a, da - db)
                };
                if !self.is_ancestor(shallow, deep, gap) {
                    ancestry.get_or_insert_with(|| {
                        format!("neither of {ka}, {kb} is an ancestor of the other")
                    });
                }
            }
            let (ca, cb) = (self.node(a).class(), self.node(b).class());
            if ca == cb && ca != NodeClass::PartialKnot {
                classes.get_or_insert_with(|| format!("{ka} and {kb} are both {ca:?}"));
            }
        }
        findings.record(Check::AdjacentDepthsDiffer, same_depth);
        findings.record(Check::AdjacentAncestry, ancestry);
        findings.record(Check::AdjacentClasses, classes);

        // (h)
        findings.record(Check::Size, self.check_size(&scan, &axis));

        ValidationReport {
            outcomes: findings.outcomes,
        }
    }

    fn scan_tree(&self) -> TreeScan {
        let limit = self.slot_count();
        let mut depth = vec![None; limit];
        let mut in_order = Vec::with_capacity(self.len());
        let mut broken = None;

        if let Some(root) = self.root {
            match self.try_node(root) {
                None => broken = Some("root names a freed slot".to_string()),
                Some(n) if n.parent.is_some() => {
                    broken = Some(format!("root {} has a parent link", n.key))
                }
                Some(_) => {}
            }
        }
        if broken.is_some() {
            return TreeScan {
                in_order,
                depth,
                broken,
            };
        }

        // iterative in-order walk: (node, depth) stack of pending left spines
        let mut stack: Vec<(Idx, u32)> = Vec::new();
        let mut cur = self.root.map(|r| (r, 0u32));
        'walk: loop {
            while let Some((i, d)) = cur {
                if depth[i as usize].is_some() {
                    broken = Some(format!("node {} reached twice", self.node(i).key));
                    break 'walk;
                }
                depth[i as usize] = Some(d);
                stack.push((i, d));
                cur = match self.child_checked(i, true) {
                    Ok(c) => c.map(|c| (c, d + 1)),
                    Err(why) => {
                        broken = Some(why);
                        break 'walk;
                    }
                };
            }
            let Some((i, d)) = stack.pop() else { break };
            in_order.push(i);
            cur = match self.child_checked(i, false) {
                Ok(c) => c.map(|c| (c, d + 1)),
                Err(why) => {
                    broken = Some(why);
                    break;
                }
            };
        }
        TreeScan {
            in_order,
            depth,
            broken,
        }
    }

    fn child_checked(&self, i: Idx, left: bool) -> Result<Option<Idx>, String> {
        let n = self.node(i);
        let Some(c) = (if left { n.left } else { n.right }) else {
            return Ok(None);
        };
        match self.try_node(c) {
            None => Err(format!("node {} links to a freed slot", n.key)),
            Some(child) if child.parent != Some(i) => Err(format!(
                "child {} of {} does not point back to its parent",
                child.key, n.key
            )),
            Some(_) => Ok(Some(c)),
        }
    }

    fn scan_axis(&self) -> Result<Vec<Idx>, String> {
        let limit = self.slot_count();
        let mut out = Vec::with_capacity(self.len());
        let mut prev: Option<Idx> = None;
        let mut cur = self.head;
        while let Some(c) = cur {
            if out.len() >= limit {
                return Err("axis does not terminate".to_string());
            }
            let Some(n) = self.try_node(c) else {
                return Err("axis links to a freed slot".to_string());
            };
            if n.prev != prev {
                return Err(format!("prev link of {} is inconsistent", n.key));
            }
            if let Some(p) = prev {
                let pk = self.node(p).key;
                if pk >= n.key {
                    return Err(format!("axis keys {pk} then {}", n.key));
                }
            }
            out.push(c);
            prev = Some(c);
            cur = n.next;
        }
        if prev != self.tail {
            return Err("tail is not the last axis node".to_string());
        }
        Ok(out)
    }

    fn check_counters(&self, scan: &TreeScan) -> Option<String> {
        if scan.broken.is_some() {
            return Some("tree structure broken; counters not recountable".to_string());
        }
        // children precede parents when nodes are taken deepest first
        let mut order = scan.in_order.clone();
        order.sort_by_key(|&i| std::cmp::Reverse(scan.depth[i as usize]));
        let mut size = vec![0u32; self.slot_count()];
        for &i in &order {
            let n = self.node(i);
            let l = n.left.map_or(0, |c| size[c as usize]);
            let r = n.right.map_or(0, |c| size[c as usize]);
            if (n.lcount, n.rcount) != (l, r) {
                return Some(format!(
                    "node {} stores ({}, {}) but subtrees hold ({l}, {r})",
                    n.key, n.lcount, n.rcount
                ));
            }
            size[i as usize] = l + r + 1;
        }
        None
    }

    fn check_size(&self, scan: &TreeScan, axis: &[Idx]) -> Option<String> {
        let live = self.live_count();
        if scan.in_order.len() != self.len() || axis.len() != self.len() || live != self.len() {
            return Some(format!(
                "size {} but tree holds {}, axis {}, arena {}",
                self.len(),
                scan.in_order.len(),
                axis.len(),
                live
            ));
        }
        if self.head != scan.in_order.first().copied() || self.tail != scan.in_order.last().copied()
        {
            return Some("head/tail are not the minimum/maximum nodes".to_string());
        }
        None
    }

    fn is_ancestor(&self, ancestor: Idx, mut node: Idx, gap: u32) -> bool {
        for _ in 0..gap {
            match self.node(node).parent {
                Some(p) => node = p,
                None => return false,
            }
        }
        node == ancestor
    }
}
