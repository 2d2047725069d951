//! Card-game merge sort over doubly linked chains.
//!
//! [`merger`] walks a forward-only cursor through `X` and drops each element
//! of `Y` in front of the first `X` element that exceeds it, like sorting a
//! hand of cards. Once `X` runs out, the rest of `Y` is attached with a
//! single splice. [`sort`] drives the merger in pairwise rounds over a table
//! of run heads, carrying an odd last run into the next round.
//!
//! Nodes are relinked, never copied. The same routines run over the axis of
//! a [`Cbst`](crate::Cbst) when trees are merged.

use crate::Key;

pub(crate) type Link = u32;

/// Link storage the merger can work over.
pub(crate) trait Links {
    fn key(&self, i: Link) -> Key;
    fn prev(&self, i: Link) -> Option<Link>;
    fn next(&self, i: Link) -> Option<Link>;
    fn set_prev(&mut self, i: Link, to: Option<Link>);
    fn set_next(&mut self, i: Link, to: Option<Link>);
}

/// A detached sublist: `head.prev` and `tail.next` are both `None`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Span {
    pub(crate) head: Link,
    pub(crate) tail: Link,
    pub(crate) len: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MergeCounters {
    /// Key comparisons.
    pub comparisons: u64,
    /// Link-field writes.
    pub splices: u64,
}

/// Merges two detached ascending spans. Comparisons never exceed
/// `x.len + y.len`; on equal keys `x` elements stay first.
pub(crate) fn merge_spans<L: Links>(
    links: &mut L,
    x: Option<Span>,
    y: Option<Span>,
    counters: &mut MergeCounters,
) -> Option<Span> {
    let (x, y) = match (x, y) {
        (None, y) => return y,
        (x, None) => return x,
        (Some(x), Some(y)) => (x, y),
    };
    let start = counters.comparisons;
    let mut head = x.head;
    let mut tail = x.tail;
    let mut xc = x.head;
    let mut yc = Some(y.head);
    while let Some(yi) = yc {
        counters.comparisons += 1;
        if links.key(xc) <= links.key(yi) {
            if xc == x.tail {
                // X exhausted: the remainder of Y follows as one block
                links.set_next(xc, Some(yi));
                links.set_prev(yi, Some(xc));
                counters.splices += 2;
                tail = y.tail;
                break;
            }
            xc = links.next(xc).expect("span interior has a successor");
        } else {
            let y_next = links.next(yi);
            let before = links.prev(xc);
            links.set_prev(yi, before);
            links.set_next(yi, Some(xc));
            links.set_prev(xc, Some(yi));
            counters.splices += 3;
            match before {
                Some(b) => {
                    links.set_next(b, Some(yi));
                    counters.splices += 1;
                }
                None => head = yi,
            }
            yc = y_next;
        }
    }
    debug_assert!(counters.comparisons - start <= (x.len + y.len) as u64);
    Some(Span {
        head,
        tail,
        len: x.len + y.len,
    })
}

/// Pairwise merger rounds over a run table. Returns the merged span and the
/// number of rounds executed.
pub(crate) fn merge_rounds<L: Links>(
    links: &mut L,
    mut table: Vec<Span>,
    counters: &mut MergeCounters,
) -> (Option<Span>, u32) {
    let mut rounds = 0;
    while table.len() > 1 {
        rounds += 1;
        let mut next = Vec::with_capacity(table.len().div_ceil(2));
        let mut pairs = table.chunks_exact(2);
        for pair in &mut pairs {
            let merged = merge_spans(links, Some(pair[0]), Some(pair[1]), counters);
            next.push(merged.expect("merging two spans yields one"));
        }
        // odd count: the last run waits for the next round
        next.extend(pairs.remainder().iter().copied());
        table = next;
    }
    (table.pop(), rounds)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct ChainNode {
    key: Key,
    prev: Option<Link>,
    next: Option<Link>,
}

#[derive(Debug, Clone, Default)]
struct Pool {
    nodes: Vec<ChainNode>,
}

impl Links for Pool {
    fn key(&self, i: Link) -> Key {
        self.nodes[i as usize].key
    }
    fn prev(&self, i: Link) -> Option<Link> {
        self.nodes[i as usize].prev
    }
    fn next(&self, i: Link) -> Option<Link> {
        self.nodes[i as usize].next
    }
    fn set_prev(&mut self, i: Link, to: Option<Link>) {
        self.nodes[i as usize].prev = to;
    }
    fn set_next(&mut self, i: Link, to: Option<Link>) {
        self.nodes[i as usize].next = to;
    }
}

impl Pool {
    fn walk(&self, span: Option<Span>) -> impl Iterator<Item = Key> + '_ {
        let mut cur = span.map(|s| s.head);
        std::iter::from_fn(move || {
            let i = cur?;
            cur = self.next(i);
            Some(self.key(i))
        })
    }

    /// Moves `other` into this pool and returns its nodes' new span.
    fn absorb(&mut self, other: Chain) -> Option<Span> {
        let offset = Link::try_from(self.nodes.len()).expect("chain exceeds u32 indices");
        let shift = |l: Option<Link>| l.map(|i| i + offset);
        self.nodes
            .extend(other.pool.nodes.into_iter().map(|n| ChainNode {
                prev: shift(n.prev),
                next: shift(n.next),
                ..n
            }));
        other.span.map(|s| Span {
            head: s.head + offset,
            tail: s.tail + offset,
            len: s.len,
        })
    }
}

/// Standalone doubly linked list of keys. Duplicates are allowed.
#[derive(Debug, Clone, Default)]
pub struct Chain {
    pool: Pool,
    span: Option<Span>,
}

impl Chain {
    pub fn new() -> Self {
        Chain::default()
    }

    pub fn len(&self) -> usize {
        self.span.map_or(0, |s| s.len)
    }

    pub fn is_empty(&self) -> bool {
        self.span.is_none()
    }

    pub fn first(&self) -> Option<Key> {
        self.span.map(|s| self.pool.key(s.head))
    }

    pub fn last(&self) -> Option<Key> {
        self.span.map(|s| self.pool.key(s.tail))
    }

    pub fn iter(&self) -> impl Iterator<Item = Key> + '_ {
        self.pool.walk(self.span)
    }

    /// Keys walking backwards from the tail.
    pub fn iter_rev(&self) -> impl Iterator<Item = Key> + '_ {
        let mut cur = self.span.map(|s| s.tail);
        std::iter::from_fn(move || {
            let i = cur?;
            cur = self.pool.prev(i);
            Some(self.pool.key(i))
        })
    }

    pub fn to_vec(&self) -> Vec<Key> {
        self.iter().collect()
    }

    pub fn is_ascending(&self) -> bool {
        let keys = self.to_vec();
        keys.windows(2).all(|w| w[0] <= w[1])
    }
}

impl FromIterator<Key> for Chain {
    fn from_iter<I: IntoIterator<Item = Key>>(iter: I) -> Self {
        let mut nodes: Vec<ChainNode> = iter
            .into_iter()
            .map(|key| ChainNode {
                key,
                prev: None,
                next: None,
            })
            .collect();
        let len = nodes.len();
        let last = Link::try_from(len).expect("chain exceeds u32 indices");
        for (i, node) in nodes.iter_mut().enumerate() {
            let i = i as Link;
            node.prev = i.checked_sub(1);
            node.next = (i + 1 < last).then_some(i + 1);
        }
        let span = (len > 0).then(|| Span {
            head: 0,
            tail: last - 1,
            len,
        });
        Chain {
            pool: Pool { nodes },
            span,
        }
    }
}

/// Merges two ascending chains into one. Each element is visited once and
/// comparisons never exceed `x.len() + y.len()`.
pub fn merger(x: Chain, y: Chain) -> (Chain, MergeCounters) {
    debug_assert!(
        x.is_ascending() && y.is_ascending(),
        "merger inputs must be ascending"
    );
    let mut pool = x.pool;
    let x_span = x.span;
    let y_span = pool.absorb(y);
    let mut counters = MergeCounters::default();
    let span = merge_spans(&mut pool, x_span, y_span, &mut counters);
    (Chain { pool, span }, counters)
}

/// Heads of the maximal ascending runs of a chain, in input order.
#[derive(Debug, Clone)]
pub struct RunTable {
    pool: Pool,
    runs: Vec<Span>,
    scan_comparisons: u64,
}

impl RunTable {
    /// Number of runs.
    pub fn kappa(&self) -> usize {
        self.runs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }

    pub fn run(&self, i: usize) -> Vec<Key> {
        self.pool.walk(Some(self.runs[i])).collect()
    }

    pub fn runs(&self) -> Vec<Vec<Key>> {
        (0..self.kappa()).map(|i| self.run(i)).collect()
    }

    pub fn scan_comparisons(&self) -> u64 {
        self.scan_comparisons
    }

    fn singletons(chain: Chain) -> RunTable {
        let mut pool = chain.pool;
        let mut runs = Vec::with_capacity(chain.span.map_or(0, |s| s.len));
        let mut cur = chain.span.map(|s| s.head);
        while let Some(i) = cur {
            cur = pool.next(i);
            pool.set_prev(i, None);
            pool.set_next(i, None);
            runs.push(Span {
                head: i,
                tail: i,
                len: 1,
            });
        }
        RunTable {
            pool,
            runs,
            scan_comparisons: 0,
        }
    }
}

/// Splits a chain into maximal non-descending runs in one pass.
pub fn detect_runs(input: Chain) -> RunTable {
    let mut pool = input.pool;
    let mut runs = Vec::new();
    let mut scan_comparisons = 0;
    let Some(span) = input.span else {
        return RunTable {
            pool,
            runs,
            scan_comparisons,
        };
    };
    let mut run = Span {
        head: span.head,
        tail: span.head,
        len: 1,
    };
    while let Some(n) = pool.next(run.tail) {
        scan_comparisons += 1;
        if pool.key(n) >= pool.key(run.tail) {
            run.tail = n;
            run.len += 1;
        } else {
            pool.set_next(run.tail, None);
            pool.set_prev(n, None);
            runs.push(run);
            run = Span {
                head: n,
                tail: n,
                len: 1,
            };
        }
    }
    runs.push(run);
    RunTable {
        pool,
        runs,
        scan_comparisons,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RunMode {
    /// Start from the maximal ascending runs of the input.
    #[default]
    Natural,
    /// Start from one run per element.
    Singleton,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SortStats {
    /// Comparisons made by mergers.
    pub comparisons: u64,
    /// Comparisons made while detecting runs (natural mode only).
    pub scan_comparisons: u64,
    pub splices: u64,
    pub rounds: u32,
    /// Runs in the table before the first round.
    pub initial_runs: usize,
}

/// Sorts a chain ascending (stable) by pairwise merger rounds.
pub fn sort(input: Chain, mode: RunMode) -> (Chain, SortStats) {
    let table = match mode {
        RunMode::Natural => detect_runs(input),
        RunMode::Singleton => RunTable::singletons(input),
    };
    sort_runs(table)
}

/// Merges every run of `table` into one ascending chain.
pub fn sort_runs(table: RunTable) -> (Chain, SortStats) {
    let RunTable {
        mut pool,
        runs,
        scan_comparisons,
    } = table;
    let mut stats = SortStats {
        scan_comparisons,
        initial_runs: runs.len(),
        ..SortStats::default()
    };
    let mut counters = MergeCounters::default();
    let (span, rounds) = merge_rounds(&mut pool, runs, &mut counters);
    stats.comparisons = counters.comparisons;
    stats.splices = counters.splices;
    stats.rounds = rounds;
    (Chain { pool, span }, stats)
}

/// Convenience: sorts a slice through a chain.
pub fn sort_keys(keys: &[Key], mode: RunMode) -> (Vec<Key>, SortStats) {
    let (chain, stats) = sort(keys.iter().copied().collect(), mode);
    (chain.to_vec(), stats)
}
