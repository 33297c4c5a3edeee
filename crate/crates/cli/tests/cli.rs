use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_supercong"));
    cmd.env_remove("SUPERCONG_CACHE");
    cmd
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

#[test]
fn zhao1_two_primes_pass() {
    let o = run(&["verify", "--ids", "ZHAO1", "--primes", "5,7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let recs = v.as_array().unwrap();
    assert_eq!(recs.len(), 2);
    assert!(recs.iter().all(|r| r["pass"] == true && r["rejected"] == false));
    assert_eq!(recs[0]["params"]["p"], 5);
    assert_eq!(recs[1]["modulus"], "7^1");
}

#[test]
fn spec_verify_invocation() {
    let o = run(&[
        "verify",
        "--ids",
        "MAIN,ZHAO1",
        "--primes",
        "7,11,13",
        "--r",
        "2..3",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    let ids: Vec<&str> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["id"].as_str().unwrap())
        .collect();
    // ZHAO1 ignores r; MAIN runs at each (p, r)
    assert_eq!(ids.iter().filter(|&&i| i == "ZHAO1").count(), 3);
    assert_eq!(ids.iter().filter(|&&i| i == "MAIN").count(), 6);
}

#[test]
fn bernoulli_exact_and_modular() {
    let o = run(&["bernoulli", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-1/30\n");
    // B_10 = 5/66 and 66 * 32 = 2112 = 43 * 49 + 5
    let o = run(&["bernoulli", "10", "--mod", "7^2"]);
    assert_eq!(stdout(&o), "32\n");
    // B_6 = 1/42 is not a 7-adic integer
    let o = run(&["bernoulli", "6", "--mod", "7"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("divisible by 7"));
}

#[test]
fn rejected_records_do_not_fail_unless_strict() {
    let o = run(&["verify", "--ids", "MAIN", "--primes", "5", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("rejected") && text.contains("hypothesis p > 5"), "{text}");
    assert!(text.contains("1 checks: 0 passed, 0 failed, 1 rejected, 0 errors"));

    let o = run(&[
        "verify",
        "--ids",
        "MAIN",
        "--primes",
        "5",
        "--r",
        "2",
        "--strict-hypotheses",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["verify", "--ids", "NOPE"][..],
        &["verify", "--primes", "7,9"],
        &["verify", "--bogus"],
        &["verify", "--threads", "0"],
        &["compute", "--n", "5", "--p", "8", "--r", "2"],
        &["scan", "--n", "6", "--primes", "11"],
        &["frobnicate"],
        &["cache", "stats"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
        assert!(!stderr(&o).is_empty(), "{args:?}");
    }
    let o = run(&["verify", "--ids", "NOPE"]);
    assert!(stderr(&o).contains("Usage:"));
}

#[test]
fn resource_limit_exits_three() {
    // the unbounded sum to 40 * 13^5 is far beyond the polynomial-length limit
    let o = run(&[
        "verify",
        "--ids",
        "THM2_RGE2",
        "--primes",
        "13",
        "--r",
        "5",
        "--k",
        "40",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn compute_text_and_json() {
    let o = run(&["compute", "--n", "5", "--k", "1", "--p", "7", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("S_5^(1)(7^2) = 42 (mod 7^2)"));
    let o = run(&[
        "compute",
        "--n",
        "5",
        "--p",
        "7",
        "--r",
        "2",
        "--m",
        "3",
        "--method",
        "convolution",
        "--format",
        "json",
    ]);
    let v = json(&o);
    assert_eq!(v["modulus"], "7^3");
    assert_eq!(v["method"], "convolution");
    assert_eq!(v["cached"], false);
}

#[test]
fn csv_output() {
    let o = run(&[
        "verify",
        "--ids",
        "CASOL_RESIDUE",
        "--primes",
        "7",
        "--format",
        "csv",
        "--no-timings",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "id,p,r,n,k,m,a,alphas,modulus,lhs,rhs,pass,rejected,method,elapsed_ms,paper_ref"
    );
    assert_eq!(lines.count(), 4);
}

#[test]
fn scan_calibrates_first() {
    let o = run(&["scan", "--n", "7", "--primes", "11..31", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let first_data = text.find("n=7").unwrap();
    let last_cal = text.rfind("calibration").unwrap();
    assert!(last_cal < first_data);
    assert!(!text.contains("MISMATCH"));
    assert_eq!(text.lines().filter(|l| l.starts_with("n=7")).count(), 7);
}

fn compute_cached(path: &Path) -> Output {
    run(&[
        "compute",
        "--n",
        "5",
        "--p",
        "11",
        "--r",
        "2",
        "--cache-path",
        path.to_str().unwrap(),
    ])
}

#[test]
fn cache_miss_then_hit_across_processes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sums.jsonl");
    let first = compute_cached(&path);
    let second = compute_cached(&path);
    assert!(!stdout(&first).contains("cached"));
    assert!(stdout(&second).trim_end().ends_with("cached"));
    assert_eq!(stdout(&first).split("  ").next(), stdout(&second).split("  ").next());
    let rec: Value = serde_json::from_str(fs::read_to_string(&path).unwrap().lines().next().unwrap()).unwrap();
    for key in [
        "n",
        "target",
        "p",
        "r",
        "bound",
        "coprime",
        "m",
        "residue",
        "method",
        "engine_version",
        "timestamp",
    ] {
        assert!(rec.get(key).is_some(), "missing {key}");
    }
    assert_eq!(rec["residue"], "110");

    let st = run(&["cache", "stats", "--cache-path", path.to_str().unwrap()]);
    assert!(stdout(&st).contains("records: 1"));
    let cl = run(&["cache", "clear", "--cache-path", path.to_str().unwrap()]);
    assert_eq!(cl.status.code(), Some(0));
    assert!(!path.exists());
}

#[test]
fn cache_path_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("env.jsonl");
    let o = bin()
        .args(["compute", "--n", "3", "--p", "7", "--r", "2"])
        .env("SUPERCONG_CACHE", &path)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(path.exists());
}

#[test]
fn engine_version_bump_recomputes() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sums.jsonl");
    compute_cached(&path);
    let text = fs::read_to_string(&path).unwrap();
    let old = text.replace(supercong_core::ENGINE_VERSION, "supercong-core/0.0.0-old");
    fs::write(&path, old.replace("\"residue\":\"110\"", "\"residue\":\"7\"")).unwrap();
    let o = compute_cached(&path);
    assert!(!stdout(&o).contains("cached"));
    assert!(stdout(&o).contains("= 110 "));
    let st = stdout(&run(&["cache", "stats", "--cache-path", path.to_str().unwrap()]));
    assert!(st.contains("records: 1") && st.contains("stale: 1"), "{st}");
}

#[test]
fn corrupt_cache_is_quarantined_and_run_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sums.jsonl");
    compute_cached(&path);
    let mut text = fs::read_to_string(&path).unwrap();
    text.push_str("{\"n\": 5, \"target\": \n");
    fs::write(&path, text).unwrap();
    let o = compute_cached(&path);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("corrupt"));
    assert!(!stdout(&o).contains("cached"));
    let aside: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .filter(|n| n.contains(".corrupt-"))
        .collect();
    assert_eq!(aside.len(), 1);
    assert!(stdout(&compute_cached(&path)).trim_end().ends_with("cached"));
}

#[test]
fn unwritable_cache_warns_and_proceeds() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("no-such-dir").join("sums.jsonl");
    let o = compute_cached(&path);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
    assert!(stdout(&o).contains("= 110 "));
}

#[test]
fn cache_is_transparent() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sums.jsonl");
    let args = [
        "verify",
        "--ids",
        "MAIN,REC_ADD1,REC_S21",
        "--primes",
        "7,11",
        "--format",
        "json",
        "--no-timings",
    ];
    let plain = run(&args);
    let mut with_cache = args.to_vec();
    with_cache.extend(["--cache-path", path.to_str().unwrap()]);
    let cold = run(&with_cache);
    let warm = run(&with_cache);
    assert_eq!(plain.stdout, cold.stdout);
    assert_eq!(plain.stdout, warm.stdout);
}

#[test]
fn thread_count_does_not_change_json() {
    let base = [
        "verify",
        "--primes",
        "7,11",
        "--r",
        "1..2",
        "--format",
        "json",
        "--no-timings",
    ];
    let one = run(&[&base[..], &["--threads", "1"]].concat());
    let eight = run(&[&base[..], &["--threads", "8"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, eight.stdout);
}

#[test]
fn fail_fast_with_all_passing_runs_everything() {
    let o = run(&[
        "verify",
        "--ids",
        "ZHAO1",
        "--primes",
        "5..13",
        "--fail-fast",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o).as_array().unwrap().len(), 4);
}
