use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn mutvis(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mutvis"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_is_golden() {
    let out = mutvis(&["generate", "-n", "5", "--seed", "42"]);
    assert!(out.status.success());
    let golden = std::fs::read_to_string(fixture("generate_n5_seed42.txt")).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
}

#[test]
fn single_robot_run() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("one.txt");
    let trace = dir.path().join("one.trace");
    assert!(mutvis(&["generate", "-n", "1", "--seed", "3", "-o", s(&scenario)]).status.success());
    let out = mutvis(&["run", s(&scenario), "--trace", s(&trace)]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert_eq!(text.matches("\nround ").count(), 1);
    assert!(text.ends_with("outcome solved rounds=1\n"));

    let frames = dir.path().join("frames");
    assert!(mutvis(&["render", s(&trace), s(&frames)]).status.success());
    let files: Vec<_> = std::fs::read_dir(&frames).unwrap().collect();
    assert_eq!(files.len(), 1);
}

#[test]
fn generate_run_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for seed in 0..5 {
        let scenario = dir.path().join(format!("s{seed}.txt"));
        let trace = dir.path().join(format!("t{seed}.trace"));
        let svg = dir.path().join(format!("svg{seed}"));
        let n = (8 + seed).to_string();
        assert!(mutvis(&["generate", "-n", &n, "--seed", &seed.to_string(), "-o", s(&scenario)]).status.success());
        let out = mutvis(&["run", s(&scenario), "--trace", s(&trace), "--svg-dir", s(&svg)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let out = mutvis(&["verify", s(&trace)]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
        let report = String::from_utf8(out.stdout).unwrap();
        assert!(!report.contains("FAIL"));
        assert!(std::fs::read_dir(&svg).unwrap().count() >= 1);
    }
}

#[test]
fn traces_replay_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.trace");
    let b = dir.path().join("b.trace");
    let scenario = fixture("random_n10_seed0.txt");
    assert!(mutvis(&["run", s(&scenario), "--trace", s(&a)]).status.success());
    assert!(mutvis(&["run", s(&scenario), "--trace", s(&b)]).status.success());
    let a = std::fs::read(&a).unwrap();
    assert_eq!(a, std::fs::read(&b).unwrap());
    assert_eq!(a, std::fs::read(fixture("random_n10_seed0.trace")).unwrap());
}

#[test]
fn broken_compute_fails() {
    let out = mutvis(&["run", s(&fixture("generate_n5_seed42.txt")), "--broken-compute"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("outcome violation"));
}

#[test]
fn verify_flags_corrupted_traces() {
    let out = mutvis(&["verify", s(&fixture("bad_distance.trace"))]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("pairwise distance") && l.contains("FAIL")));

    let out = mutvis(&["verify", s(&fixture("third_color.trace"))]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("two colors") && l.contains("FAIL")));

    let out = mutvis(&["verify", s(&fixture("n5_seed42.trace"))]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn usage_and_parse_errors_exit_2() {
    assert_eq!(mutvis(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(mutvis(&["run", "/definitely/not/here.txt"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.trace");
    std::fs::write(&junk, "not a trace\n").unwrap();
    assert_eq!(mutvis(&["verify", s(&junk)]).status.code(), Some(2));
    assert_eq!(mutvis(&["generate", "-n", "0"]).status.code(), Some(2));
    assert_eq!(mutvis(&["generate", "-n", "9", "--spread", "2"]).status.code(), Some(2));
}

#[test]
fn run_flags_override_the_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.trace");
    let out = mutvis(&[
        "run",
        s(&fixture("random_n10_seed0.txt")),
        "--trace",
        s(&trace),
        "--frames",
        "aligned",
        "--k-samples",
        "32",
        "--max-rounds",
        "50",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&trace).unwrap();
    assert!(text.contains("scenario n=10 seed=0 frames=aligned predict=true k=32 max_rounds=50\n"));

    let out = mutvis(&["run", s(&fixture("random_n10_seed0.txt")), "--max-rounds", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("outcome max-rounds-exceeded"));
}
