#![allow(dead_code)]

use std::collections::BTreeSet;

use cbst::{Cbst, DeleteStats, Key, Mode};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const MAX_N: usize = 4096;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `count` distinct keys from `0..universe`, ascending.
pub fn distinct_sorted(rng: &mut impl Rng, universe: usize, count: usize) -> Vec<Key> {
    let mut keys: Vec<Key> = rand::seq::index::sample(rng, universe, count.min(universe))
        .into_iter()
        .map(|k| k as Key)
        .collect();
    keys.sort_unstable();
    keys
}

pub fn shuffled(rng: &mut impl Rng, n: usize) -> Vec<Key> {
    let mut keys: Vec<Key> = (1..=n as Key).collect();
    keys.shuffle(rng);
    keys
}

/// Tree over `keys` built by inserting them in the given order.
pub fn inserted(keys: &[Key], mode: Mode) -> Cbst {
    let mut t = Cbst::new(mode);
    for &k in keys {
        t.insert(k).unwrap();
    }
    t
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    /// Grows to `target` by random inserts, then churns delete/insert pairs.
    Churn,
    /// Mixed insert/delete/build operations around `target`.
    Mixed,
}

#[derive(Debug, Clone, Copy)]
pub struct Sequence {
    pub seed: u64,
    pub mode: Mode,
    pub kind: Kind,
    pub target: usize,
}

#[derive(Debug, Clone, Copy)]
pub enum Op {
    Insert(Key),
    Delete(Key),
    Build(usize),
}

/// What the visitor sees after each mutation.
pub struct Step<'a> {
    pub seq: &'a Sequence,
    pub op: Op,
    pub tree: &'a Cbst,
    pub oracle: &'a BTreeSet<Key>,
    pub delete: Option<DeleteStats>,
}

pub const CHURN_SIZES: [usize; 2] = [1 << 8, 1 << 12];
const CHURN_PER_SIZE: u64 = 4;

/// The fixed corpus: a few churn sequences at exactly 2^8 and 2^12 keys in
/// plain mode, then mixed sequences of log-uniform target size.
pub fn corpus(count: u64) -> impl Iterator<Item = Sequence> {
    (0..count).map(|seed| {
        let churn = CHURN_SIZES.len() as u64 * CHURN_PER_SIZE;
        if seed < churn {
            return Sequence {
                seed,
                mode: Mode::Plain,
                kind: Kind::Churn,
                target: CHURN_SIZES[(seed / CHURN_PER_SIZE) as usize],
            };
        }
        let mut r = rng(seed);
        let exp = r.gen_range(0..=12u32);
        let target = r.gen_range(1..=(1usize << exp)).min(MAX_N);
        Sequence {
            seed,
            mode: if seed % 2 == 0 {
                Mode::Plain
            } else {
                Mode::Ordinal
            },
            kind: Kind::Mixed,
            target,
        }
    })
}

/// Runs one sequence against a `BTreeSet` oracle, calling `visit` after
/// every mutation. Errors describe the first divergence.
pub fn run(
    seq: &Sequence,
    mut visit: impl FnMut(Step<'_>) -> Result<(), String>,
) -> Result<(), String> {
    let mut r = rng(seq.seed ^ 0x9e37_79b9_7f4a_7c15);
    let universe = (seq.target * 4).max(8);
    let mut tree = Cbst::new(seq.mode);
    let mut oracle = BTreeSet::new();
    let mut ops = Vec::new();

    match seq.kind {
        Kind::Churn => {
            let keys = distinct_sorted(&mut r, universe, seq.target);
            let mut order = keys.clone();
            order.shuffle(&mut r);
            ops.extend(order.into_iter().map(Op::Insert));
        }
        Kind::Mixed => {
            if seq.target > 64 || r.gen_bool(0.5) {
                ops.push(Op::Build(r.gen_range(seq.target / 2..=seq.target)));
            }
        }
    }

    let mut i = 0;
    let steps = match seq.kind {
        Kind::Churn => seq.target,
        Kind::Mixed => 48 + seq.target.min(64),
    };
    loop {
        let op = if i < ops.len() {
            ops[i]
        } else if i >= ops.len() + steps {
            break;
        } else {
            next_op(&mut r, seq, &oracle, universe)
        };
        i += 1;

        let mut delete = None;
        match op {
            Op::Insert(k) => {
                let fresh = oracle.insert(k);
                let res = tree.insert(k);
                if res.is_ok() != fresh {
                    return Err(format!("insert {k}: tree {res:?}, oracle fresh={fresh}"));
                }
            }
            Op::Delete(k) => {
                let present = oracle.remove(&k);
                let res = tree.delete(k);
                if res.is_ok() != present {
                    return Err(format!(
                        "delete {k}: tree {res:?}, oracle present={present}"
                    ));
                }
                delete = res.ok();
            }
            Op::Build(count) => {
                let keys = distinct_sorted(&mut r, universe, count);
                tree = Cbst::build_from_sorted(&keys, seq.mode).map_err(|e| e.to_string())?;
                oracle = keys.into_iter().collect();
            }
        }
        visit(Step {
            seq,
            op,
            tree: &tree,
            oracle: &oracle,
            delete,
        })?;
    }
    Ok(())
}

fn next_op(r: &mut impl Rng, seq: &Sequence, oracle: &BTreeSet<Key>, universe: usize) -> Op {
    let pick_present = |r: &mut dyn RngCore| {
        let nth = r.gen_range(0..oracle.len());
        *oracle.iter().nth(nth).unwrap()
    };
    match seq.kind {
        // alternate delete of a present key with insert of a random one
        Kind::Churn => {
            if oracle.len() >= seq.target && !oracle.is_empty() {
                Op::Delete(pick_present(r))
            } else {
                Op::Insert(r.gen_range(0..universe) as Key)
            }
        }
        Kind::Mixed => {
            let roll = r.gen_range(0..100);
            if roll < 2 {
                Op::Build(r.gen_range(0..=seq.target))
            } else if roll < 50 {
                Op::Insert(r.gen_range(0..universe) as Key)
            } else if roll < 90 && !oracle.is_empty() {
                Op::Delete(pick_present(r))
            } else {
                Op::Delete(r.gen_range(0..universe) as Key)
            }
        }
    }
}
