use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn kosz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kosz"))
        .args(args)
        .env_remove("KOSZ_CACHE_DIR")
        .env_remove("RUST_LOG")
        .output()
        .expect("run kosz")
}

fn kosz_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_kosz"));
    cmd.args(args).env_remove("KOSZ_CACHE_DIR").env_remove("RUST_LOG");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("run kosz")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn eliminations(o: &Output) -> u64 {
    let err = stderr(o);
    let pos = err.find("eliminations: ").expect("eliminations logged");
    err[pos + 14..].split(',').next().unwrap().trim().parse().unwrap()
}

#[test]
fn table_diagram_layout() {
    let o = kosz(&["table", "--n", "3", "--c", "3", "--char", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0].split('|').nth(1).unwrap().split_whitespace().count(), 8);
    assert_eq!(lines.len(), 2 + 7);
    assert!(lines[2].ends_with("<-"));
    assert!(lines[5].contains(" 189 "));
    assert_eq!(lines[8].split('|').nth(1).unwrap().split_whitespace().nth(7), Some("1"));
}

#[test]
fn index_output() {
    let o = kosz(&["index", "--n", "4", "--c", "2", "--char", "0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("ind = 5 (certified up to i_max = 6)"));
    let o = kosz(&["index", "--n", "2", "--c", "3"]);
    assert!(stdout(&o).starts_with("ind >= 2 (certified up to i_max = 2)"));
}

#[test]
fn verify_duality_ok_line() {
    let o = kosz(&["verify", "duality", "--n", "3", "--c", "2", "--tmax", "4", "--char", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("OK ("), "{text}");
    assert!(text.trim_end().ends_with("entries checked)"));
}

#[test]
fn verify_subcommands_pass() {
    for args in [
        vec!["verify", "vanishing", "--n", "3", "--c", "2"],
        vec!["verify", "factorial", "--n", "3", "--c", "2", "--exact"],
        vec!["verify", "coeffdim", "--n", "3", "--c", "2", "--samples", "30"],
        vec!["verify", "greenbound", "--n", "3", "--c", "3"],
        vec!["verify", "zgen", "--n", "3", "--c", "2", "--t", "1", "--exact"],
    ] {
        let o = kosz(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn small_characteristic_factorial_is_a_finding() {
    let o = kosz(&["verify", "factorial", "--n", "7", "--c", "2", "--char", "3", "--stratum", "1,1,1,1,1,1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("findings:"), "{text}");
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let o = kosz(&["table", "--n", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--c"));
    let o = kosz(&["table", "--n", "3", "--c", "2", "--char", "4"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--char"));
    let o = kosz(&["table", "--n", "3", "--c", "2", "--threads", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--threads"));
    let o = kosz(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kosz(&["betti", "--n", "3", "--c", "2", "--k", "2"]);
    assert_eq!(o.status.code(), Some(2));
    let o = kosz(&["table", "--n", "3", "--c", "3", "--max-degree", "10"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--max-degree"));
    let o = kosz(&["verify", "zgen", "--n", "3", "--c", "2", "--t", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--exact"));
}

#[test]
fn json_envelope_shape() {
    let o = kosz(&["table", "--n", "3", "--c", "2", "--format", "json", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["query"]["n"], 3);
    assert_eq!(v["query"]["command"], "table");
    let result = v["result"].as_array().unwrap();
    let keys: Vec<(u64, u64)> = result
        .iter()
        .map(|r| (r["t"].as_u64().unwrap(), r["d"].as_u64().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert!(result.iter().any(|r| r["t"] == 1 && r["d"] == 3 && r["dim"] == 8));
    let meta = &v["meta"];
    assert_eq!(meta["char_policy"], "multi-prime(k=2)");
    assert_eq!(meta["primes_used"].as_array().unwrap().len(), 3);
    assert_eq!(meta["engine_version"], kosz::ENGINE_VERSION);
    assert_eq!(meta["seed"], 9);
    assert!(meta["elapsed_ms"].is_u64());

    let o = kosz(&["betti", "--n", "3", "--c", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["result"].as_array().unwrap().iter().any(|r| r["i"] == 1 && r["j"] == 2 && r["beta"] == 27));
}

#[test]
fn csv_output() {
    let o = kosz(&["homology", "--n", "2", "--c", "2", "--t", "1", "--deg", "3", "--format", "csv"]);
    assert_eq!(stdout(&o), "t,d,dim\n1,3,2\n");
    let o = kosz(&["betti", "--n", "2", "--c", "2", "--k", "1", "--imax", "1", "--format", "csv"]);
    assert!(stdout(&o).lines().any(|l| l == "1,1,2"));
}

#[test]
fn warm_cache_replays_without_eliminations() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["table", "--n", "3", "--c", "3", "--char", "0", "--exact", "--cache-dir", cache];
    let env = [("RUST_LOG", "info")];
    let cold = kosz_env(&args, &env);
    let warm = kosz_env(&args, &env);
    assert_eq!(cold.status.code(), Some(0));
    assert!(eliminations(&cold) > 0);
    assert_eq!(eliminations(&warm), 0);
    assert_eq!(cold.stdout, warm.stdout);
    let lines = fs::read_to_string(dir.path().join("ranks.jsonl")).unwrap();
    assert_eq!(lines.lines().count() as u64, eliminations(&cold));
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = kosz_env(
        &["homology", "--n", "3", "--c", "2", "--t", "1", "--deg", "3", "--exact"],
        &[("KOSZ_CACHE_DIR", dir.path().to_str().unwrap())],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(Path::new(&dir.path().join("ranks.jsonl")).exists());
}

#[test]
fn corrupt_cache_line_is_skipped() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["table", "--n", "3", "--c", "2", "--exact", "--cache-dir", cache];
    let clean = kosz(&args);
    let path = dir.path().join("ranks.jsonl");
    let mut text = fs::read_to_string(&path).unwrap();
    text.insert_str(0, "{\"n\":3,\"c\":2,\"t\"\n");
    fs::write(&path, text).unwrap();
    let o = kosz(&args);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(o.stdout, clean.stdout);
    assert!(stderr(&o).contains("corrupt cache line"));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["table", "--n", "4", "--c", "2", "--threads", "3"],
        vec!["verify", "factorial", "--n", "3", "--c", "3", "--seed", "5", "--format", "csv"],
        vec!["verify", "coeffdim", "--n", "4", "--c", "2", "--seed", "5", "--samples", "40"],
    ] {
        assert_eq!(kosz(&args).stdout, kosz(&args).stdout, "{args:?}");
    }
    let a = kosz(&["table", "--n", "4", "--c", "2", "--threads", "1"]);
    let b = kosz(&["table", "--n", "4", "--c", "2", "--threads", "4"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn no_orbit_changes_nothing_printed() {
    let base = ["table", "--n", "3", "--c", "2", "--format", "csv", "--exact"];
    let mut flat = base.to_vec();
    flat.push("--no-orbit");
    assert_eq!(kosz(&base).stdout, kosz(&flat).stdout);
}

#[test]
fn chardep_reports_three() {
    let o = kosz(&["chardep", "--n", "7", "--c", "2", "--tmax", "2", "--dmin", "7", "--dmax", "7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("primes: 3\n"));
}
