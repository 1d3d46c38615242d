use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn rebuf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rebuf"))
        .args(args)
        .env_remove("REBUF_SEED")
        .output()
        .unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = rebuf(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn field<'a>(text: &'a str, key: &str) -> &'a str {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.strip_prefix(": ")))
        .unwrap_or_else(|| panic!("no '{key}' in {text}"))
}

#[test]
fn simulate_example1() {
    let f = fixture("example1.txt");
    let out = stdout_of(&[
        "simulate",
        f.to_str().unwrap(),
        "--k",
        "5",
        "--strategy",
        "mcf",
    ]);
    assert_eq!(field(&out, "output"), "1,1,3,3,3,3,2,2,2,2,2");
    assert_eq!(field(&out, "switches"), "6 -> 2");
    assert_eq!(field(&out, "switch_ratio"), "0.333333");
    assert_eq!(field(&out, "excess_run"), "0");
}

#[test]
fn simulate_example3_both_strategies() {
    let f = fixture("example3.txt");
    let f = f.to_str().unwrap();
    let picky = stdout_of(&["simulate", f, "--k", "9", "--strategy", "picky"]);
    assert_eq!(
        field(&picky, "output"),
        "3,3,3,3,3,2,2,2,2,2,2,2,2,1,1,1,1,1,1,4,4,3,3"
    );
    assert_eq!(field(&picky, "skipped"), "3");
    let mcf = stdout_of(&["simulate", f, "--k", "9", "--strategy", "mcf"]);
    assert_eq!(
        field(&mcf, "output"),
        "3,3,3,3,3,2,2,2,2,2,2,2,1,1,1,1,1,1,3,3,4,4,2"
    );
}

#[test]
fn trace_table_golden() {
    let f = fixture("example1.txt");
    let out = stdout_of(&["simulate", f.to_str().unwrap(), "--k", "5", "--trace"]);
    let golden = fs::read_to_string(fixture("example1_trace.txt")).unwrap();
    assert!(out.starts_with(&golden), "got:\n{out}");
}

#[test]
fn kmin_from_counts_and_file() {
    let out = stdout_of(&["kmin", "--o1", "7", "--o2", "6", "--sigma", "3"]);
    assert_eq!(field(&out, "k_min"), "10");
    assert_eq!(field(&out, "by_o2"), "19");
    let out = stdout_of(&["kmin", "--o1", "8", "--o2", "7", "--sigma", "4"]);
    assert_eq!(field(&out, "k_min"), "17");
    assert_eq!(field(&out, "by_o2"), "29");
    let f = fixture("example2.txt");
    let out = stdout_of(&["kmin", "--file", f.to_str().unwrap()]);
    assert_eq!(field(&out, "k_min"), "10");
}

#[test]
fn oracle_on_example1() {
    let f = fixture("example1.txt");
    let out = stdout_of(&["oracle", f.to_str().unwrap(), "--k", "5"]);
    assert_eq!(field(&out, "optimal_blocks"), "3");
    assert_eq!(field(&out, "lower_bound"), "3");
}

#[test]
fn generate_empty_has_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    stdout_of(&[
        "generate",
        "--spec",
        "uniform",
        "--n",
        "0",
        "--sigma",
        "4",
        "--seed",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        fs::read_to_string(&path).unwrap(),
        "# n=0 sigma=4 spec=uniform seed=2\n"
    );
}

#[test]
fn generate_round_trips_through_simulate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("z.txt");
    let p = path.to_str().unwrap();
    let args = [
        "generate",
        "--spec",
        "zipf:a=1.5",
        "--n",
        "300",
        "--sigma",
        "12",
        "--seed",
        "5",
    ];
    stdout_of(&[&args[..], &["--out", p]].concat());
    let again = stdout_of(&args);
    assert_eq!(fs::read_to_string(&path).unwrap(), again);
    let out = stdout_of(&["simulate", p, "--k", "6", "--strategy", "rc", "--seed", "1"]);
    assert_eq!(field(&out, "output").split(',').count(), 300);
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn experiment_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "one.cfg",
        "input_sizes = 100\ncolor_fractions = 5%\nbuffer_fractions = 5%\n\
         distributions = poisson:m=2\ntrials = 1\nbase_seed = 42\n",
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = rebuf(&[
            "experiment",
            cfg.to_str().unwrap(),
            "--output",
            out.to_str().unwrap(),
            "--parallelism",
            "3",
        ]);
        assert!(o.status.success());
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    assert!(text.starts_with("# base_seed=42\n"));
    assert_eq!(text.lines().count(), 2 + 3);
}

#[test]
fn uniform_n1000_has_nine_rows_per_strategy() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "u.cfg",
        "input_sizes = 1000\ndistributions = uniform\ntrials = 2\nformat = json\n",
    );
    let out = stdout_of(&["experiment", cfg.to_str().unwrap(), "-q"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    for s in ["bw", "rc", "picky"] {
        assert_eq!(rows.iter().filter(|r| r["strategy"] == s).count(), 9, "{s}");
    }
    assert_eq!(v["base_seed"], 1);
    assert_eq!(v["summary"][0]["cells"], 9);
}

#[test]
fn env_seed_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s.cfg",
        "input_sizes = 100\ncolor_fractions = 5%\nbuffer_fractions = 5%\n\
         distributions = uniform\ntrials = 1\nbase_seed = 3\n",
    );
    let out = Command::new(env!("CARGO_BIN_EXE_rebuf"))
        .args(["experiment", cfg.to_str().unwrap(), "-q"])
        .env("REBUF_SEED", "77")
        .output()
        .unwrap();
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("# base_seed=77\n"));
}

#[test]
fn exit_codes() {
    assert_eq!(rebuf(&["--help"]).status.code(), Some(0));
    assert_eq!(rebuf(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(
        rebuf(&["simulate", "x", "--k", "2", "--strategy", "lru"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(rebuf(&["kmin", "--o1", "3"]).status.code(), Some(1));
    let f = fixture("example1.txt");
    assert_eq!(
        rebuf(&["simulate", f.to_str().unwrap(), "--k", "0"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        rebuf(&["simulate", "/nonexistent/seq.txt", "--k", "2"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        rebuf(&[
            "oracle",
            fixture("example3.txt").to_str().unwrap(),
            "--k",
            "9"
        ])
        .status
        .code(),
        Some(2)
    );

    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.cfg", "trials = many\n");
    let o = rebuf(&["experiment", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.cfg:1"));

    let notseq = write_config(dir.path(), "n.txt", "1\n2\nthree\n");
    let o = rebuf(&["simulate", notseq.to_str().unwrap(), "--k", "2"]);
    assert_eq!(o.status.code(), Some(1));
}
