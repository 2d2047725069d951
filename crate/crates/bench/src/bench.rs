//! Kappa sweeps producing one CSV row per (kappa, mode, trial).

use std::io::Write;
use std::time::Instant;

use anyhow::{ensure, Result};
use cbst::batch::{batch_query, range_locked_batch, traditional_query};
use cbst::boundary::BoundaryParams;
use cbst::cgsm::{sort_keys, RunMode};
use cbst::{Cbst, Key, Mode};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const CSV_HEADER: &str = "mode,n,kappa,comparisons,relinks,nodes_visited,wall_nanos,depth";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchMode {
    /// Co-walk with queries already sorted.
    Batch,
    /// Co-walk charged with sorting the queries first.
    SortedBatch,
    Traditional,
    Locked,
    /// Deleting `kappa` present keys from a plain-mode copy.
    Delete,
}

impl BenchMode {
    pub fn label(self) -> &'static str {
        match self {
            BenchMode::Batch => "batch",
            BenchMode::SortedBatch => "sorted_batch",
            BenchMode::Traditional => "traditional",
            BenchMode::Locked => "locked",
            BenchMode::Delete => "delete",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BenchRow {
    pub mode: BenchMode,
    pub n: usize,
    pub kappa: usize,
    pub comparisons: u64,
    pub relinks: u64,
    pub nodes_visited: u64,
    pub wall_nanos: u64,
    pub depth: usize,
}

impl BenchRow {
    pub fn write_csv(&self, out: &mut impl Write) -> std::io::Result<()> {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            self.mode.label(),
            self.n,
            self.kappa,
            self.comparisons,
            self.relinks,
            self.nodes_visited,
            self.wall_nanos,
            self.depth
        )
    }
}

pub struct Sweep<'a> {
    pub tree: &'a Cbst,
    pub kappas: &'a [usize],
    pub trials: u32,
    pub seed: u64,
}

impl Sweep<'_> {
    pub fn run(&self) -> Result<Vec<BenchRow>> {
        let n = self.tree.len();
        ensure!(n >= 2, "bench needs at least 2 keys, got {n}");
        let keys = self.tree.in_order();
        let depth = self.tree.max_depth().unwrap_or(0);
        let (lo, hi) = (keys[0] - 1, keys[n - 1] + 1);
        let mut plain = Cbst::build_from_sorted(&keys, Mode::Plain)?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let mut rows = Vec::new();

        for &kappa in self.kappas {
            ensure!(kappa >= 1 && kappa <= n, "kappa {kappa} outside 1..={n}");
            for _ in 0..self.trials {
                let queries: Vec<Key> = (0..kappa).map(|_| rng.gen_range(lo..=hi)).collect();
                let mut sorted = queries.clone();
                sorted.sort_unstable();
                let row = |mode, comparisons, relinks, nodes_visited, started: Instant| BenchRow {
                    mode,
                    n,
                    kappa,
                    comparisons,
                    relinks,
                    nodes_visited,
                    wall_nanos: started.elapsed().as_nanos() as u64,
                    depth,
                };

                let t = Instant::now();
                let r = batch_query(self.tree, &sorted)?;
                rows.push(row(BenchMode::Batch, r.comparisons, 0, r.nodes_visited, t));

                let t = Instant::now();
                let (q, stats) = sort_keys(&queries, RunMode::Natural);
                let r = batch_query(self.tree, &q)?;
                let charged = stats.comparisons + stats.scan_comparisons + r.comparisons;
                rows.push(row(BenchMode::SortedBatch, charged, 0, r.nodes_visited, t));

                let t = Instant::now();
                let r = traditional_query(self.tree, &queries);
                rows.push(row(
                    BenchMode::Traditional,
                    r.comparisons,
                    0,
                    r.nodes_visited,
                    t,
                ));

                let t = Instant::now();
                let r = range_locked_batch(self.tree, &sorted)?;
                rows.push(row(BenchMode::Locked, r.comparisons, 0, r.nodes_visited, t));

                let victims: Vec<Key> = keys.choose_multiple(&mut rng, kappa).copied().collect();
                let t = Instant::now();
                let (mut comparisons, mut relinks, mut visited) = (0, 0, 0);
                for &k in &victims {
                    let (_, descent) = plain.search_traced(k);
                    comparisons += descent.comparisons;
                    visited += descent.visited;
                    relinks += u64::from(plain.delete(k)?.relinks);
                }
                rows.push(row(BenchMode::Delete, comparisons, relinks, visited, t));
                for &k in &victims {
                    plain.insert(k)?;
                }
            }
        }
        Ok(rows)
    }
}

/// Boundary predictions for each kappa next to the measured mean
/// comparisons of batch and traditional mode.
pub fn predictions(
    n: usize,
    depth: usize,
    kappas: &[usize],
    rows: &[BenchRow],
) -> Result<Vec<String>> {
    let mean = |mode: BenchMode, kappa: usize| {
        let hits: Vec<u64> = rows
            .iter()
            .filter(|r| r.mode == mode && r.kappa == kappa)
            .map(|r| r.comparisons)
            .collect();
        hits.iter().sum::<u64>() as f64 / hits.len().max(1) as f64
    };
    let mut lines = Vec::new();
    for &kappa in kappas {
        let p = BoundaryParams::new(n, kappa)?;
        let (b, s, t) = (
            mean(BenchMode::Batch, kappa),
            mean(BenchMode::SortedBatch, kappa),
            mean(BenchMode::Traditional, kappa),
        );
        lines.push(format!(
            "kappa={kappa} lambda={:.6} crossover_lambda={:.6} batch_predicted={} \
             depth_index={:.3} depth_favors_batch={} theta={} \
             batch={b:.1} sorted_batch={s:.1} traditional={t:.1} batch_wins={}",
            p.lambda,
            p.crossover,
            p.batch_predicted(),
            p.hbar,
            p.depth_favors_batch(depth),
            p.theta
                .map_or_else(|| "none".to_string(), |t| format!("{t:.6}")),
            b < t,
        ));
    }
    Ok(lines)
}
