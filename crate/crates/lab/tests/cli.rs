use std::path::Path;
use std::process::{Command, Output};

use synchrotree::io::{read_automaton, write_automaton};
use synchrotree::sync::cerny_automaton;

fn synchrotree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_synchrotree")).args(args).output().expect("binary runs")
}

fn text(bytes: &[u8]) -> String {
    String::from_utf8_lossy(bytes).into_owned()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_then_sync_gives_a_verified_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("a.json");
    let out = synchrotree(&["gen", "--n", "200", "--seed", "4", "--out", path(&file)]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let a = read_automaton(&file).unwrap();
    assert_eq!(a.n(), 200);

    let out = synchrotree(&["sync", "--in", path(&file), "--emit-word", "--fallback"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&text(&out.stdout)).unwrap();
    assert_eq!(v["verified"], true);
    let word = v["word"].as_str().unwrap();
    assert_eq!(word.len() as u64, v["word_len"].as_u64().unwrap());
    let mut ends: Vec<usize> = (0..a.n()).map(|s| word.bytes().fold(s, |s, c| a.step(s, c - b'a'))).collect();
    ends.dedup();
    assert_eq!(ends, vec![v["sink"].as_u64().unwrap() as usize]);
}

#[test]
fn sync_exact_on_cerny_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c.json");
    write_automaton(&file, &cerny_automaton(5).unwrap()).unwrap();
    let out = synchrotree(&["sync-exact", "--in", path(&file)]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&text(&out.stdout)).unwrap();
    assert_eq!(v["word_len"], 16);
    assert_eq!(v["method"], "exact");
}

#[test]
fn unsynchronizable_input_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("perm.json");
    std::fs::write(&file, r#"{"format":"synchrotree-automaton-v1","n":3,"alphabet":2,"delta":[[1,2,0],[0,2,1]]}"#)
        .unwrap();
    assert_eq!(synchrotree(&["sync-exact", "--in", path(&file)]).status.code(), Some(1));
    assert_eq!(synchrotree(&["sync", "--in", path(&file), "--fallback"]).status.code(), Some(1));
}

#[test]
fn malformed_automaton_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, r#"{"format":"synchrotree-automaton-v1","n":3,"alphabet":2,"delta":[[1,2,0],[0,7,1]]}"#)
        .unwrap();
    let out = synchrotree(&["sync", "--in", path(&file)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("delta[1][1]"), "{}", text(&out.stderr));

    let out = synchrotree(&["sync", "--in", path(&dir.path().join("absent.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(text(&out.stderr).contains("absent.json"));
}

#[test]
fn explore_prints_one_line_per_step() {
    let dir = tempfile::tempdir().unwrap();
    let (a, spec) = (dir.path().join("a.json"), dir.path().join("u.json"));
    assert!(synchrotree(&["gen", "--n", "50", "--seed", "2", "--out", path(&a)]).status.success());
    std::fs::write(
        &spec,
        r#"{"entries":[{"state":0,"congruence":0,"word":"aab"},{"state":7,"congruence":2,"word":"abb"}]}"#,
    )
    .unwrap();
    let out = synchrotree(&["explore", "--in", path(&a), "--spec", path(&spec)]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let lines = text(&out.stdout);
    assert!(lines.lines().count() > 0);
    for line in lines.lines() {
        serde_json::from_str::<serde_json::Value>(line).unwrap();
    }
}

#[test]
fn experiment_writes_csv_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let (cfg, csv) = (dir.path().join("cfg.json"), dir.path().join("out.csv"));
    let body = serde_json::json!({"experiment": "height", "n": [64], "trials": 5, "seed": 1, "output": csv});
    std::fs::write(&cfg, body.to_string()).unwrap();
    let out = synchrotree(&["experiment", "height", "--config", path(&cfg)]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 6);
    assert!(dir.path().join("out.csv.json").exists());

    let out = synchrotree(&["experiment", "scaling", "--config", path(&cfg)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bijection_audit_prints_counts() {
    let out = synchrotree(&["bijection-audit", "--n", "2", "--k", "2"]);
    assert!(out.status.success(), "{}", text(&out.stderr));
    let csv = text(&out.stdout);
    assert!(csv.starts_with("kind,n,k,w1,w2,cycle_good,b_hat,members,failures"));
    assert_eq!(synchrotree(&["bijection-audit", "--n", "5", "--k", "2"]).status.code(), Some(2));
}
