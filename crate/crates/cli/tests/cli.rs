use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn tamesep(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamesep")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn gen_to(dir: &Path, name: &str, args: &[&str]) -> String {
    let path = dir.join(name).to_string_lossy().into_owned();
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["--out", &path]);
    let o = tamesep(&all);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn read_json(path: &str) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["--family", "random-box", "--n", "60", "--d", "2", "--max-thinness", "2", "--seed", "9"];
    let a = gen_to(dir.path(), "a.json", &args);
    let b = gen_to(dir.path(), "b.json", &args);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let mut other = args;
    other[9] = "10";
    let c = gen_to(dir.path(), "c.json", &other);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
}

#[test]
fn fixed_families_have_their_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let w = read_json(&gen_to(dir.path(), "w.json", &["--family", "wedge", "--m", "4"]));
    assert_eq!(w["representation"]["placements"].as_array().unwrap().len(), 8);
    let sp = gen_to(dir.path(), "sp.json", &["--family", "star-path", "--r", "3", "--t", "4"]);
    let g = tamesep(&["graph", &sp]);
    assert_eq!(code(&g), 0);
    let g: Value = serde_json::from_str(&stdout(&g)).unwrap();
    assert_eq!(g["graph"]["n"], 16);
}

#[test]
fn exact_separator_is_capped() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen_to(dir.path(), "p.json", &["--family", "path", "--n", "101"]);
    let o = tamesep(&["sep", &p, "--method", "exact"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("bfs-layer"));
    let o = tamesep(&["sep", &p]);
    assert_eq!(code(&o), 0);
}

#[test]
fn grid_and_clique_separators() {
    let dir = tempfile::tempdir().unwrap();
    let g = gen_to(dir.path(), "g.json", &["--family", "grid", "--w", "8", "--h", "8"]);
    let o = tamesep(&["sep", &g, "--method", "bfs-layer"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["verified_balanced"], true);
    assert!(r["separator"].as_array().unwrap().len() <= 8);

    let k = gen_to(dir.path(), "k.json", &["--family", "complete", "--n", "9"]);
    let o = tamesep(&["sep", &k, "--method", "exact"]);
    assert_eq!(code(&o), 0);
    let r: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["separator"].as_array().unwrap().len(), 3);
}

#[test]
fn path_identity_col_profile() {
    let dir = tempfile::tempdir().unwrap();
    let p = gen_to(dir.path(), "p.json", &["--family", "path", "--n", "10"]);
    let o = tamesep(&["--format", "csv", "col", &p, "--order", "identity", "--r-max", "5"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        assert_eq!(row.split(',').nth(1), Some("2"), "{row}");
    }
    // Graph files have no geometry to order by volume.
    assert_eq!(code(&tamesep(&["col", &p])), 1);
}

#[test]
fn col_on_a_random_instance_carries_the_bound() {
    let dir = tempfile::tempdir().unwrap();
    let b = gen_to(dir.path(), "b.json", &["--family", "random-box", "--n", "80", "--d", "2", "--max-thinness", "2"]);
    let o = tamesep(&["--format", "csv", "col", &b, "--r-max", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("# c=") && l.contains("delta=")));
    assert!(text.lines().last().unwrap().split(',').nth(3).is_some_and(|b| !b.is_empty()));
}

#[test]
fn tame_check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let sp = gen_to(dir.path(), "sp.json", &["--family", "star-path", "--r", "2", "--t", "3"]);
    assert_eq!(code(&tamesep(&["tame-check", &sp])), 0);
    // star-path needs thinness r^2 = 4.
    assert_eq!(code(&tamesep(&["tame-check", &sp, "--c", "1", "--s", "1"])), 2);
    assert_eq!(code(&tamesep(&["tame-check", &sp, "--s", "1/2"])), 1);
}

#[test]
fn dichotomy_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let sp = gen_to(dir.path(), "sp.json", &["--family", "star-path", "--r", "3", "--t", "4"]);
    let o = tamesep(&["dichotomy", &sp, "--k", "2"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verified"], true);
    let w = gen_to(dir.path(), "w.json", &["--family", "wedge", "--m", "2"]);
    assert_eq!(code(&tamesep(&["dichotomy", &w, "--k", "2"])), 1);
}

#[test]
fn experiment_runs_and_rejects_empty_ladders() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"family":{"family":"wedge"},"sizes":[],"seed":1}"#).unwrap();
    assert_eq!(code(&tamesep(&["experiment", cfg.to_str().unwrap()])), 1);

    std::fs::write(
        &cfg,
        r#"{"family":{"family":"random_box","d":2,"max_thinness":2},"sizes":[30,60],"seed":4,"r_max":3}"#,
    )
    .unwrap();
    let out = dir.path().join("report");
    let o = tamesep(&["experiment", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["report.json", "col_profiles.csv", "separator_scaling.csv", "tameness.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }
}

#[test]
fn verify_lemmas_small_run() {
    let o = tamesep(&["--seed", "3", "--format", "csv", "verify-lemmas", "--pairs", "30", "--families", "10", "--interval-pairs", "30"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.starts_with("# seed=3"));
    assert!(text.lines().skip(2).all(|l| l.split(',').nth(5) == Some("0")), "{text}");
}

#[test]
fn thread_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_tamesep"))
        .args(["verify-lemmas", "--pairs", "5", "--families", "2", "--interval-pairs", "5"])
        .env("TAMESEP_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
    let o = Command::new(env!("CARGO_BIN_EXE_tamesep"))
        .args(["verify-lemmas", "--pairs", "5", "--families", "2", "--interval-pairs", "5"])
        .env("TAMESEP_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
}
