use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use revsynth_core::io::write_truth_table;
use revsynth_core::TruthTable;

fn revsynth(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_revsynth"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn with_table(tt: &TruthTable) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f.txt"), write_truth_table(tt)).unwrap();
    dir
}

fn json_number(report: &str, key: &str) -> u64 {
    let needle = format!("\"{key}\": ");
    let at = report.find(&needle).unwrap() + needle.len();
    report[at..]
        .chars()
        .take_while(char::is_ascii_digit)
        .collect::<String>()
        .parse()
        .unwrap()
}

#[test]
fn synth_identity_within_budget() {
    let dir = with_table(&TruthTable::identity(3));
    let o = revsynth(dir.path(), &["synth", "f.txt", "--q", "32", "--out", "f.tfc", "--report", "r.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("r.json")).unwrap();
    assert!(json_number(&report, "ancilla") <= 32);
    assert!(report.contains("\"strategy\": \"MinimizeT2\""));
    let v = revsynth(dir.path(), &["verify", "f.tfc", "f.txt"]);
    assert_eq!(v.status.code(), Some(0), "{}", stdout(&v));
}

#[test]
fn budget_too_small_names_minimum() {
    let dir = with_table(&TruthTable::identity(3));
    let o = revsynth(dir.path(), &["synth", "f.txt", "--q", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("at least 9"), "{}", stderr(&o));
}

#[test]
fn strategy_two_recorded() {
    let dir = with_table(&TruthTable::random(4, 3));
    let o = revsynth(
        dir.path(),
        &["synth", "f.txt", "--q", "40", "--strategy", "2", "--out", "f.tfc", "--report", "r.json"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("r.json")).unwrap();
    assert!(report.contains("\"strategy\": \"MinimizeT3\""));
}

#[test]
fn overrides_reach_the_synthesizer() {
    let dir = with_table(&TruthTable::random(5, 3));
    let o = revsynth(
        dir.path(),
        &["synth", "f.txt", "--q", "80", "--k", "3", "--group-size", "2", "--out", "f.tfc", "--report", "r.json"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = fs::read_to_string(dir.path().join("r.json")).unwrap();
    assert_eq!(json_number(&report, "k"), 3);
    assert_eq!(json_number(&report, "s"), 2);
    assert_eq!(json_number(&report, "t1"), 16);
}

#[test]
fn deleted_gate_is_caught() {
    let tt = TruthTable::random(4, 12);
    let dir = with_table(&tt);
    let o = revsynth(dir.path(), &["synth", "f.txt", "--q", "40", "--out", "f.tfc"]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("f.tfc")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let last_gate = lines.iter().rposition(|l| l.starts_with("t3")).unwrap();
    let mutated: Vec<&str> = lines
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != last_gate)
        .map(|(_, l)| *l)
        .collect();
    fs::write(dir.path().join("bad.tfc"), mutated.join("\n")).unwrap();
    let v = revsynth(dir.path(), &["verify", "bad.tfc", "f.txt"]);
    assert_eq!(v.status.code(), Some(3));
    assert!(stdout(&v).contains("mismatch x="));
}

#[test]
fn width_mismatch_has_own_code() {
    let dir = with_table(&TruthTable::identity(3));
    revsynth(dir.path(), &["synth", "f.txt", "--q", "32", "--out", "f.tfc"]);
    fs::write(dir.path().join("g.txt"), write_truth_table(&TruthTable::identity(4))).unwrap();
    let v = revsynth(dir.path(), &["verify", "f.tfc", "g.txt"]);
    assert_eq!(v.status.code(), Some(4));
    let s = revsynth(dir.path(), &["simulate", "f.tfc", "--input", "10"]);
    assert_eq!(s.status.code(), Some(4));
}

#[test]
fn parse_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("f.txt"), "n 1\n0\n1\n1\n").unwrap();
    let o = revsynth(dir.path(), &["synth", "f.txt", "--q", "10"]);
    assert_eq!(o.status.code(), Some(1));
    let o = revsynth(dir.path(), &["synth", "missing.txt", "--q", "10"]);
    assert_eq!(o.status.code(), Some(1));
    let o = revsynth(dir.path(), &["synth", "f.txt", "--q", "10", "--strategy", "3"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn simulate_one_input_and_whole_table() {
    let tt = TruthTable::bit_reversal(3);
    let dir = with_table(&tt);
    revsynth(dir.path(), &["synth", "f.txt", "--q", "32", "--out", "f.tfc"]);
    let s = revsynth(dir.path(), &["simulate", "f.tfc", "--input", "110"]);
    assert_eq!(s.status.code(), Some(0));
    assert_eq!(stdout(&s).lines().next(), Some("011"));
    let all = revsynth(dir.path(), &["simulate", "f.tfc"]);
    assert_eq!(stdout(&all), write_truth_table(&tt));
}

#[test]
fn bounds_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = stdout(&revsynth(dir.path(), &["bounds", "8", "160"]));
    assert!(o.contains("l_shannon_upper 8448 valid"));
    assert!(o.contains("d_shannon_upper 2304 valid"));
    let o = stdout(&revsynth(dir.path(), &["bounds", "8", "64"]));
    assert!(o.contains("l_shannon_upper inf invalid"));
    assert!(o.contains("d_shannon_upper inf invalid"));
    let o = stdout(&revsynth(dir.path(), &["bounds", "8", "32", "--t", "4"]));
    assert!(o.contains("l_conj 288 valid"));
    assert!(o.contains("d_conj 72 valid"));
}

#[test]
fn bench_rows_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let o = revsynth(
        dir.path(),
        &["bench", "--n-list", "4", "--q-grid", "20,33,40,64,128", "--strategies", "1,2", "--seed", "1"],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let csv = stdout(&o);
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().filter(|r| r.starts_with("4,20,")).all(|r| r.ends_with(",false")));
    assert!(rows.iter().filter(|r| !r.starts_with("4,20,")).all(|r| r.ends_with(",true")));
    let again = revsynth(
        dir.path(),
        &["bench", "--n-list", "4", "--q-grid", "20,33,40,64,128", "--strategies", "1,2", "--seed", "1"],
    );
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn bench_budget_too_small() {
    let dir = tempfile::tempdir().unwrap();
    let o = revsynth(dir.path(), &["bench", "--n-list", "4", "--q-grid", "3"]);
    assert_eq!(o.status.code(), Some(2));
}
