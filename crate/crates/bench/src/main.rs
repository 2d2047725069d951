use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use cbst::batch::{batch_query, range_locked_batch, traditional_query};
use cbst::cgsm::{sort_keys, RunMode};
use cbst::{Cbst, Key, Mode};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod bench;
mod dataset;

use bench::{BenchRow, Sweep, CSV_HEADER};
use dataset::Dist;

#[derive(Parser)]
#[command(
    name = "cbst-bench",
    version,
    about = "Generate key sets, build and query trees, and sweep benchmarks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a generated key file.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// uniform, sorted, reversed or runs:R
        #[arg(long, default_value = "uniform")]
        dist: Dist,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sort (if needed) and bulk-build a tree, then report its depth.
    Build {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = TreeMode::Ordinal)]
        mode: TreeMode,
        #[arg(long)]
        validate: bool,
    },
    /// Sort keys with the linked merge sort; keys to stdout, counters to stderr.
    Sort {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Runs::Natural)]
        runs: Runs,
    },
    /// Answer membership queries and print a summary.
    Query {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        queries: PathBuf,
        #[arg(long, value_enum)]
        mode: QueryKind,
        #[arg(long)]
        validate: bool,
    },
    /// Insert keys in file order and check every structural invariant.
    Validate {
        #[command(flatten)]
        input: Input,
    },
    /// Sweep query counts and write one CSV row per mode and trial.
    Bench {
        #[arg(long, required_unless_present = "n", conflicts_with = "n")]
        r#in: Option<PathBuf>,
        /// Generate a uniform dataset of this size instead of reading one.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        kappa_grid: Vec<usize>,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, default_value_t = 3)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        validate: bool,
    },
}

#[derive(Args)]
struct Input {
    #[arg(long = "in")]
    path: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum TreeMode {
    Plain,
    Ordinal,
}

impl From<TreeMode> for Mode {
    fn from(m: TreeMode) -> Mode {
        match m {
            TreeMode::Plain => Mode::Plain,
            TreeMode::Ordinal => Mode::Ordinal,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Runs {
    Natural,
    Singleton,
}

#[derive(Clone, Copy, ValueEnum)]
enum QueryKind {
    Batch,
    Traditional,
    Locked,
}

enum Verdict {
    Ok,
    Invalid,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Invalid) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn execute(command: Command) -> Result<Verdict> {
    match command {
        Command::Gen { n, seed, dist, out } => {
            dataset::write_keys(&out, &dataset::generate(n, seed, dist))?;
            Ok(Verdict::Ok)
        }
        Command::Build {
            input,
            mode,
            validate,
        } => {
            let tree = load_tree(&input.path, mode.into())?;
            let valid = tree.validate().is_valid();
            println!(
                "n={} depth={} valid={valid}",
                tree.len(),
                depth_label(&tree)
            );
            Ok(verdict(validate, valid))
        }
        Command::Sort { input, runs } => {
            let keys = dataset::read_keys(&input.path)?;
            let mode = match runs {
                Runs::Natural => RunMode::Natural,
                Runs::Singleton => RunMode::Singleton,
            };
            let (sorted, stats) = sort_keys(&keys, mode);
            let mut out = BufWriter::new(io::stdout().lock());
            for k in sorted {
                writeln!(out, "{k}")?;
            }
            out.flush()?;
            eprintln!(
                "n={} runs={} rounds={} comparisons={} scan_comparisons={} splices={}",
                keys.len(),
                stats.initial_runs,
                stats.rounds,
                stats.comparisons,
                stats.scan_comparisons,
                stats.splices
            );
            Ok(Verdict::Ok)
        }
        Command::Query {
            input,
            queries,
            mode,
            validate,
        } => {
            let tree = load_tree(&input.path, Mode::Plain)?;
            let raw = dataset::read_keys(&queries)?;
            let (queries, sort_comparisons) = match mode {
                QueryKind::Traditional => (raw, 0),
                _ => {
                    let (q, s) = sort_keys(&raw, RunMode::Natural);
                    (q, s.comparisons + s.scan_comparisons)
                }
            };
            let report = match mode {
                QueryKind::Batch => batch_query(&tree, &queries)?,
                QueryKind::Traditional => traditional_query(&tree, &queries),
                QueryKind::Locked if queries.is_empty() => {
                    bail!("locked mode needs at least one query")
                }
                QueryKind::Locked => range_locked_batch(&tree, &queries)?,
            };
            print!(
                "mode={} n={} queries={} hits={} misses={} comparisons={} sort_comparisons={} nodes_visited={}",
                report.mode.label(),
                tree.len(),
                queries.len(),
                report.hits(),
                report.misses(),
                report.comparisons,
                sort_comparisons,
                report.nodes_visited
            );
            if let Some(len) = report.locked_len {
                print!(" locked_len={len}");
            }
            println!();
            Ok(verdict(validate, tree.validate().is_valid()))
        }
        Command::Validate { input } => {
            let keys = dataset::read_keys(&input.path)?;
            let mut tree = Cbst::new(Mode::Ordinal);
            for (i, &k) in keys.iter().enumerate() {
                tree.insert(k)
                    .with_context(|| format!("{}:{}", input.path.display(), i + 1))?;
            }
            let report = tree.validate();
            print!("{report}");
            println!(
                "n={} depth={} valid={}",
                tree.len(),
                depth_label(&tree),
                report.is_valid()
            );
            Ok(verdict(true, report.is_valid()))
        }
        Command::Bench {
            r#in,
            n,
            kappa_grid,
            csv,
            trials,
            seed,
            validate,
        } => {
            let keys = match (r#in, n) {
                (Some(path), _) => dataset::read_keys(&path)?,
                (None, Some(n)) => dataset::generate(n, seed, Dist::Uniform),
                (None, None) => unreachable!("clap requires --in or --n"),
            };
            let tree = tree_from(keys, Mode::Plain)?;
            let valid = tree.validate().is_valid();
            let rows = Sweep {
                tree: &tree,
                kappas: &kappa_grid,
                trials,
                seed,
            }
            .run()?;
            write_csv(&csv, &rows)?;
            let depth = tree.max_depth().unwrap_or(0);
            println!(
                "n={} depth={depth} rows={} csv={}",
                tree.len(),
                rows.len(),
                csv.display()
            );
            for line in bench::predictions(tree.len(), depth, &kappa_grid, &rows)? {
                println!("{line}");
            }
            Ok(verdict(validate, valid))
        }
    }
}

fn verdict(enforce: bool, valid: bool) -> Verdict {
    if enforce && !valid {
        Verdict::Invalid
    } else {
        Verdict::Ok
    }
}

fn depth_label(tree: &Cbst) -> String {
    tree.max_depth()
        .map_or_else(|| "none".to_string(), |d| d.to_string())
}

fn load_tree(path: &Path, mode: Mode) -> Result<Cbst> {
    tree_from(dataset::read_keys(path)?, mode)
        .with_context(|| format!("building from {}", path.display()))
}

/// Sorts with the linked merge sort unless already ascending, then builds.
fn tree_from(keys: Vec<Key>, mode: Mode) -> Result<Cbst> {
    let keys = if keys.windows(2).all(|w| w[0] <= w[1]) {
        keys
    } else {
        sort_keys(&keys, RunMode::Natural).0
    };
    Ok(Cbst::build_from_sorted(&keys, mode)?)
}

fn write_csv(path: &Path, rows: &[BenchRow]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = BufWriter::new(file);
    writeln!(out, "{CSV_HEADER}")?;
    for row in rows {
        row.write_csv(&mut out)?;
    }
    out.flush()?;
    Ok(())
}
