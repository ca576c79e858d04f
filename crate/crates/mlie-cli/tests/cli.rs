use std::process::{Command, Output};

fn mlie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mlie"))
        .args(args)
        .env_remove("MLIE_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn jcoef_prints_tab_separated_lines() {
    let o = mlie(&["jcoef", "--max", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("# run {"));
    assert!(out.lines().any(|l| l == "3\t864299970"), "{out}");
}

#[test]
fn dims_compares_with_true_counts() {
    let o = mlie(&["dims", "--m", "2", "--n", "2", "--true"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("Witt=20245856256, c(4)=20245856256, verdict EQUAL"));
}

#[test]
fn presentation_exit_codes() {
    assert_eq!(mlie(&["verify", "presentation", "--relations", "Re:3", "--samples", "1", "--seed", "7"]).status.code(), Some(0));
    let o = mlie(&["verify", "presentation", "--relations", "Im:2", "--samples", "1", "--negate-c"]);
    assert_eq!(o.status.code(), Some(1));
    let out = stdout(&o);
    assert!(out.contains("FAIL Im:2"));
    assert!(out.contains("repro: mlie verify presentation --relations Im:2"));
    assert_eq!(mlie(&["verify", "presentation", "--relations", "Re:99"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(mlie(&["dims", "--m", "2"]).status.code(), Some(2));
    assert_eq!(mlie(&["--window", "1", "jcoef", "--max", "2"]).status.code(), Some(2));
    assert_eq!(mlie(&["--samples", "0", "verify", "gl2", "--model", "ref2x2"]).status.code(), Some(2));
}

#[test]
fn json_output_is_reproducible_and_schema_tagged() {
    let args = ["--format", "json", "verify", "gl2", "--model", "ref2x2", "--samples", "3", "--seed", "11"];
    let (a, b) = (mlie(&args), mlie(&args));
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["schema"], "mlie-output/1");
    assert_eq!(v["config"]["seed"], "11");
    assert_eq!(v["config"]["samples"], "3");
}

#[test]
fn config_file_values_yield_to_flags() {
    let dir = std::env::temp_dir().join(format!("mlie-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("run.json");
    std::fs::write(&path, r#"{"schema": "mlie-runconfig/1", "window": 5, "seed": "42", "subset": "1:1,2:1"}"#).unwrap();
    let p = path.to_str().unwrap();
    let o = mlie(&["--config", p, "--window", "6", "--format", "json", "jcoef", "--max", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["window"], "6");
    assert_eq!(v["config"]["seed"], "42");
    assert_eq!(v["config"]["subset"], "1:1,2:1");
    assert_eq!(v["result"][2]["c"], "196884");

    std::fs::write(&path, r#"{"schema": "other/9"}"#).unwrap();
    assert_eq!(mlie(&["--config", p, "jcoef", "--max", "1"]).status.code(), Some(2));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn exp_then_decompose_round_trips() {
    let dir = std::env::temp_dir().join(format!("mlie-cli-op-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let op = dir.join("op.json");
    let o = mlie(&["--subset", "1:1,2:1", "--window", "5", "exp", "e(0,2,1) - 2*e(1,2,1)", "--save", op.to_str().unwrap()]);
    assert!(o.status.success());
    let o = mlie(&["decompose", "--input", op.to_str().unwrap(), "--n0", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("layer 3: e(0,2,1) - 2*e(1,2,1)"), "{out}");
    assert!(out.contains("recomposition agrees: true"));
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn commutator_of_letter_roots() {
    let o = mlie(&["commutator", "--alpha", "a(0,2,1)", "--beta", "a(-1)", "--u", "2", "--v", "3", "--window", "4"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("z[a(-1) + a(2,1)] (grade 2, u^1 v^1) = -e(1,2,1)"), "{out}");
    let o = mlie(&["commutator", "--alpha", "2*a(-1) + a(2,1)", "--beta", "a(-1)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn thread_cap_is_recorded() {
    let o = Command::new(env!("CARGO_BIN_EXE_mlie"))
        .args(["--format", "json", "verify", "presentation", "--relations", "H:2", "--samples", "1"])
        .env("MLIE_THREADS", "2")
        .output()
        .unwrap();
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["config"]["threads"], "2");
}
