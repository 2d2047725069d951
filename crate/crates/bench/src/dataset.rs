//! Key files: one signed decimal integer per LF-terminated line, no header.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use cbst::Key;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dist {
    /// A seeded permutation of `1..=n`.
    Uniform,
    Sorted,
    Reversed,
    /// A seeded permutation of `1..=n` cut into `r` near-equal chunks, each
    /// sorted ascending.
    Runs(usize),
}

impl FromStr for Dist {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "uniform" => return Ok(Dist::Uniform),
            "sorted" => return Ok(Dist::Sorted),
            "reversed" => return Ok(Dist::Reversed),
            _ => {}
        }
        let r = s
            .strip_prefix("runs:")
            .or_else(|| s.strip_prefix("runs(").and_then(|t| t.strip_suffix(')')))
            .ok_or_else(|| {
                format!("unknown distribution `{s}` (uniform, sorted, reversed, runs:R)")
            })?;
        match r.parse::<usize>() {
            Ok(r) if r > 0 => Ok(Dist::Runs(r)),
            _ => Err(format!("run count in `{s}` must be a positive integer")),
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Uniform => f.write_str("uniform"),
            Dist::Sorted => f.write_str("sorted"),
            Dist::Reversed => f.write_str("reversed"),
            Dist::Runs(r) => write!(f, "runs:{r}"),
        }
    }
}

pub fn generate(n: usize, seed: u64, dist: Dist) -> Vec<Key> {
    let mut keys: Vec<Key> = (1..=n as Key).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match dist {
        Dist::Sorted => {}
        Dist::Reversed => keys.reverse(),
        Dist::Uniform => keys.shuffle(&mut rng),
        Dist::Runs(r) => {
            keys.shuffle(&mut rng);
            let r = r.min(n.max(1));
            let mut start = 0;
            for i in 0..r {
                let end = n * (i + 1) / r;
                keys[start..end].sort_unstable();
                start = end;
            }
        }
    }
    keys
}

pub fn read_keys(path: &Path) -> Result<Vec<Key>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    let mut keys = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.with_context(|| format!("{}: read failed", path.display()))?;
        match line.parse::<Key>() {
            Ok(k) => keys.push(k),
            Err(_) => bail!("{}:{}: malformed key `{}`", path.display(), i + 1, line),
        }
    }
    Ok(keys)
}

pub fn write_keys(path: &Path, keys: &[Key]) -> Result<()> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    let mut out = BufWriter::new(file);
    for k in keys {
        writeln!(out, "{k}")?;
    }
    out.flush()
        .with_context(|| format!("cannot write {}", path.display()))
}
