use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cbst-bench"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn gen(dir: &TempDir, name: &str, n: usize, seed: u64, dist: &str) -> PathBuf {
    let p = path(dir, name);
    let n = n.to_string();
    let seed = seed.to_string();
    let out = bench(&[
        "gen",
        "--n",
        &n,
        "--seed",
        &seed,
        "--dist",
        dist,
        "--out",
        s(&p),
    ]);
    assert!(out.status.success(), "{out:?}");
    p
}

fn field(line: &str, name: &str) -> u64 {
    line.split_whitespace()
        .find_map(|kv| kv.strip_prefix(&format!("{name}=")))
        .unwrap_or_else(|| panic!("{name} missing in {line}"))
        .parse()
        .unwrap()
}

#[test]
fn gen_sorted_is_plain_lines() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "s.txt", 7, 0, "sorted");
    assert_eq!(fs::read_to_string(p).unwrap(), "1\n2\n3\n4\n5\n6\n7\n");
}

#[test]
fn gen_is_deterministic_per_seed() {
    let dir = TempDir::new().unwrap();
    let a = fs::read(gen(&dir, "a.txt", 500, 11, "uniform")).unwrap();
    let b = fs::read(gen(&dir, "b.txt", 500, 11, "uniform")).unwrap();
    let c = fs::read(gen(&dir, "c.txt", 500, 12, "uniform")).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn runs_distribution_yields_that_many_runs() {
    let dir = TempDir::new().unwrap();
    for dist in ["runs:3", "runs(3)"] {
        let p = gen(&dir, "r.txt", 3000, 5, dist);
        let out = bench(&["sort", "--in", s(&p)]);
        let stats = String::from_utf8_lossy(&out.stderr).into_owned();
        let runs = field(&stats, "runs");
        assert!((1..=3).contains(&runs), "{stats}");
    }
}

#[test]
fn build_reports_floor_log_depth() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "s.txt", 1023, 0, "sorted");
    let out = bench(&["build", "--in", s(&p), "--validate"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("depth=9 valid=true"));

    let p = gen(&dir, "u.txt", 1000, 3, "reversed");
    let out = bench(&["build", "--in", s(&p), "--mode", "plain"]);
    assert_eq!(stdout(&out).trim(), "n=1000 depth=9 valid=true");
}

#[test]
fn sort_emits_sorted_keys() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "u.txt", 200, 9, "uniform");
    for runs in ["natural", "singleton"] {
        let out = bench(&["sort", "--in", s(&p), "--runs", runs]);
        assert!(out.status.success());
        let keys: Vec<i64> = stdout(&out).lines().map(|l| l.parse().unwrap()).collect();
        assert_eq!(keys, (1..=200).collect::<Vec<_>>());
        let stats = String::from_utf8_lossy(&out.stderr).into_owned();
        assert!(field(&stats, "comparisons") <= 200 * 8 + 200);
    }
}

#[test]
fn query_modes_agree_on_hits() {
    let dir = TempDir::new().unwrap();
    let tree = gen(&dir, "t.txt", 800, 1, "uniform");
    let queries = path(&dir, "q.txt");
    let q: String = (0..300)
        .map(|i| format!("{}\n", (i * 37) % 1000 - 50))
        .collect();
    fs::write(&queries, q).unwrap();
    let hits: Vec<u64> = ["batch", "traditional", "locked"]
        .iter()
        .map(|mode| {
            let out = bench(&[
                "query",
                "--in",
                s(&tree),
                "--queries",
                s(&queries),
                "--mode",
                mode,
            ]);
            assert!(out.status.success(), "{out:?}");
            let line = stdout(&out);
            assert!(line.starts_with(&format!("mode={mode}")));
            field(&line, "hits")
        })
        .collect();
    assert_eq!(hits[0], hits[1]);
    assert_eq!(hits[0], hits[2]);
}

#[test]
fn bench_writes_stable_csv() {
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "out.csv");
    let out = bench(&[
        "bench",
        "--n",
        "4096",
        "--kappa-grid",
        "100,1400",
        "--csv",
        s(&csv),
        "--trials",
        "2",
    ]);
    assert!(out.status.success(), "{out:?}");
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("mode,n,kappa,comparisons,relinks,nodes_visited,wall_nanos,depth")
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2 * 2 * 5);
    assert!(rows
        .iter()
        .all(|r| r.len() == 8 && r[1] == "4096" && r[7] == "12"));
    for r in rows.iter().filter(|r| r[0] == "delete") {
        let (kappa, relinks): (u64, u64) = (r[2].parse().unwrap(), r[4].parse().unwrap());
        assert!(relinks <= 10 * kappa);
    }

    let mean = |mode: &str, kappa: &str| {
        let v: Vec<u64> = rows
            .iter()
            .filter(|r| r[0] == mode && r[2] == kappa)
            .map(|r| r[3].parse().unwrap())
            .collect();
        v.iter().sum::<u64>() / v.len() as u64
    };
    // 4096 / ceil(log2 4096) = 341 lies between the two grid points
    assert!(mean("batch", "100") > mean("traditional", "100"));
    assert!(mean("batch", "1400") < mean("traditional", "1400"));
    let predictions = stdout(&out);
    assert!(
        predictions.contains("kappa=100 ") && predictions.contains("crossover_lambda=0.083333")
    );
}

#[test]
fn validate_inserts_in_file_order() {
    let dir = TempDir::new().unwrap();
    let p = gen(&dir, "u.txt", 300, 4, "uniform");
    let out = bench(&["validate", "--in", s(&p)]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("valid=true"));
}

#[test]
fn errors_map_to_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad = path(&dir, "bad.txt");
    fs::write(&bad, "4\n2\nseven\n").unwrap();
    let out = bench(&["build", "--in", s(&bad)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains(":3:"));

    let dup = path(&dir, "dup.txt");
    fs::write(&dup, "1\n2\n2\n").unwrap();
    assert_eq!(bench(&["build", "--in", s(&dup)]).status.code(), Some(2));
    assert_eq!(bench(&["validate", "--in", s(&dup)]).status.code(), Some(2));

    let missing = path(&dir, "nope.txt");
    assert_eq!(bench(&["sort", "--in", s(&missing)]).status.code(), Some(2));
    assert_eq!(
        bench(&["gen", "--n", "3", "--dist", "zipf", "--out", s(&bad)])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(bench(&["query", "--in", s(&bad)]).status.code(), Some(2));
    assert_eq!(
        bench(&["bench", "--kappa-grid", "1", "--csv", s(&bad)])
            .status
            .code(),
        Some(2)
    );
    let unwritable = dir.path().join("no/such/dir/out.txt");
    assert_eq!(
        bench(&["gen", "--n", "3", "--out", s(&unwritable)])
            .status
            .code(),
        Some(2)
    );
}
