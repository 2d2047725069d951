//! Batch membership queries against the axis, and the per-key baseline.
//!
//! All three modes count `comparisons` as three-way key comparisons: one per
//! visited tree node for a descent, one per cursor test for a co-walk.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::tree::{Cbst, Idx};
use crate::Key;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QueryMode {
    /// One co-walk of the sorted queries against the whole axis.
    Batch,
    /// An independent root descent per query.
    Traditional,
    /// Two descents lock the axis range spanned by the queries, then a
    /// co-walk of that range only.
    RangeLocked,
}

impl QueryMode {
    pub fn label(self) -> &'static str {
        match self {
            QueryMode::Batch => "batch",
            QueryMode::Traditional => "traditional",
            QueryMode::RangeLocked => "locked",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Hit,
    Miss,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryReport {
    pub mode: QueryMode,
    /// One entry per query, in query order.
    pub outcomes: Vec<Outcome>,
    pub comparisons: u64,
    pub nodes_visited: u64,
    /// Axis nodes inside the locked range (range-locked mode only).
    pub locked_len: Option<usize>,
}

impl QueryReport {
    fn new(mode: QueryMode, queries: usize) -> Self {
        QueryReport {
            mode,
            outcomes: Vec::with_capacity(queries),
            comparisons: 0,
            nodes_visited: 0,
            locked_len: None,
        }
    }

    pub fn hits(&self) -> usize {
        self.outcomes.iter().filter(|&&o| o == Outcome::Hit).count()
    }

    pub fn misses(&self) -> usize {
        self.outcomes.len() - self.hits()
    }
}

fn check_sorted(queries: &[Key]) -> Result<()> {
    match queries.windows(2).position(|w| w[0] > w[1]) {
        Some(i) => Err(Error::QueriesNotSorted { index: i + 1 }),
        None => Ok(()),
    }
}

/// Walks the axis from `start` up to (excluding) `stop` alongside the sorted
/// queries. The cursor never retreats and stays put on a hit, so repeated
/// queries each report a hit.
fn co_walk(
    tree: &Cbst,
    start: Option<Idx>,
    stop: Option<Idx>,
    queries: &[Key],
    report: &mut QueryReport,
) -> usize {
    let mut cursor = start.filter(|&c| Some(c) != stop);
    let mut touched = usize::from(cursor.is_some());
    for &q in queries {
        let outcome = loop {
            let Some(c) = cursor else { break Outcome::Miss };
            let node = tree.node(c);
            report.comparisons += 1;
            match node.key.cmp(&q) {
                Ordering::Less => {
                    cursor = node.next.filter(|&n| Some(n) != stop);
                    touched += usize::from(cursor.is_some());
                }
                Ordering::Equal => break Outcome::Hit,
                Ordering::Greater => break Outcome::Miss,
            }
        };
        report.outcomes.push(outcome);
    }
    report.nodes_visited += touched as u64;
    touched
}

/// Answers ascending `queries` with one pass over the axis. Comparisons
/// never exceed `tree.len() + queries.len()`.
pub fn batch_query(tree: &Cbst, queries: &[Key]) -> Result<QueryReport> {
    check_sorted(queries)?;
    let mut report = QueryReport::new(QueryMode::Batch, queries.len());
    co_walk(tree, tree.head, None, queries, &mut report);
    Ok(report)
}

/// Answers each query by its own root descent. Queries may be in any order.
pub fn traditional_query(tree: &Cbst, queries: &[Key]) -> QueryReport {
    let mut report = QueryReport::new(QueryMode::Traditional, queries.len());
    for &q in queries {
        let (found, descent) = tree.descend(q);
        report.comparisons += descent.comparisons;
        report.nodes_visited += descent.visited;
        report.outcomes.push(if found.is_some() {
            Outcome::Hit
        } else {
            Outcome::Miss
        });
    }
    report
}

/// Locates the axis range `[min(queries), max(queries)]` with two descents,
/// then co-walks only that range.
pub fn range_locked_batch(tree: &Cbst, queries: &[Key]) -> Result<QueryReport> {
    check_sorted(queries)?;
    let (&low, &high) = match (queries.first(), queries.last()) {
        (Some(l), Some(h)) => (l, h),
        _ => return Err(Error::EmptyQueries),
    };
    let mut report = QueryReport::new(QueryMode::RangeLocked, queries.len());
    let first = lower_bound(tree, low, &mut report);
    let last = upper_bound(tree, high, &mut report);
    let locked = match (first, last) {
        (Some(f), Some(l)) if tree.node(f).key <= tree.node(l).key => {
            co_walk(tree, Some(f), tree.node(l).next, queries, &mut report)
        }
        _ => {
            report.outcomes.resize(queries.len(), Outcome::Miss);
            0
        }
    };
    report.locked_len = Some(locked);
    Ok(report)
}

/// First axis node with key `>= key`.
fn lower_bound(tree: &Cbst, key: Key, report: &mut QueryReport) -> Option<Idx> {
    let mut found = None;
    let mut cur = tree.root;
    while let Some(c) = cur {
        let n = tree.node(c);
        report.comparisons += 1;
        report.nodes_visited += 1;
        cur = match n.key.cmp(&key) {
            Ordering::Less => n.right,
            Ordering::Equal => return Some(c),
            Ordering::Greater => {
                found = Some(c);
                n.left
            }
        };
    }
    found
}

/// Last axis node with key `<= key`.
fn upper_bound(tree: &Cbst, key: Key, report: &mut QueryReport) -> Option<Idx> {
    let mut found = None;
    let mut cur = tree.root;
    while let Some(c) = cur {
        let n = tree.node(c);
        report.comparisons += 1;
        report.nodes_visited += 1;
        cur = match n.key.cmp(&key) {
            Ordering::Greater => n.left,
            Ordering::Equal => return Some(c),
            Ordering::Less => {
                found = Some(c);
                n.right
            }
        };
    }
    found
}
