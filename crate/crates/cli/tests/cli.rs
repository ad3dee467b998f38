use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

fn mcg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mcg"))
        .args(args)
        .env_remove("MCG_WORKERS")
        .output()
        .expect("binary runs")
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_mcg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../tables").join(name);
    std::fs::read_to_string(p).unwrap()
}

const DIC6: &str = "((2·12,6,-1),1;[(0,1),(1,6),6])";

#[test]
fn genus_10_table_matches_golden_file() {
    let o = mcg(&["classify", "--genus", "10", "--nonsplit"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("genus10_nonsplit.txt"));
}

#[test]
fn genus_11_table_matches_golden_file() {
    let o = mcg(&["classify", "--genus", "11", "--nonsplit", "--exclude-quaternion"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), golden("genus11_nonsplit.txt"));
}

#[test]
fn worker_count_does_not_change_tables() {
    let one = Command::new(env!("CARGO_BIN_EXE_mcg"))
        .args(["classify", "--genus", "10", "--nonsplit"])
        .env("MCG_WORKERS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&one), golden("genus10_nonsplit.txt"));
    let four = mcg(&["--workers", "4", "classify", "--genus", "10", "--nonsplit"]);
    assert_eq!(stdout(&four), golden("genus10_nonsplit.txt"));
}

#[test]
fn classify_json_and_csv() {
    let o = mcg(&["-f", "json", "classify", "--genus", "10", "--nonsplit"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["schema"], "mcg/1");
    let o = mcg(&["-f", "csv", "classify", "--genus", "10", "--nonsplit"]);
    let text = stdout(&o);
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rd.records().count(), 13);
}

#[test]
fn validate_exit_codes() {
    let o = mcg(&["validate", "--meta", DIC6]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("genus: 11"));

    let o = mcg(&["validate", "--meta", "((2·12,6,-1),1;[(0,1),(1,6),3])"]);
    assert_eq!(o.status.code(), Some(1));

    let o = mcg(&["validate", "(12,1;(1,6),(5,6))"]);
    assert_eq!(o.status.code(), Some(0));

    let o = mcg(&["validate", "--cyclic", "(12,1;(1,6),(1,6))"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn parse_error_names_offset_and_token() {
    let o = mcg(&["validate", "--meta", "((2·12,6,-1),1;[(0,1),(1,6)x6])"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("byte 28"), "{e}");
    assert!(e.contains("x6"), "{e}");
}

#[test]
fn bad_group_parameters_are_input_errors() {
    let o = mcg(&["validate", "--meta", "((2·12,5,-1),1;[(0,1),(1,6),6])"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn input_from_stdin_and_file() {
    let o = with_stdin(&["validate", "--meta", "-"], DIC6);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.txt");
    std::fs::write(&path, DIC6).unwrap();
    let o = mcg(&["validate", "--meta", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn json_round_trip_through_validate() {
    let o = mcg(&["-f", "json", "lift", "--meta", DIC6]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let data = serde_json::to_string(&v["lifts"][0]["data"]).unwrap();
    let o = with_stdin(&["validate", "--meta", "-"], &data);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("((4·12,12,-1),1;[(0,1),(1,6),6])"));
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let o = mcg(&["-f", "json", "-o", path.to_str().unwrap(), "derive", "--meta", DIC6]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(v["schema"], "mcg/1");
    assert_eq!(v["text"]["d_f"], "(12,1;(1,6),(5,6))");
}

#[test]
fn derive_prints_factor_pair() {
    let o = mcg(&["derive", "--meta", DIC6]);
    assert!(stdout(&o).starts_with("[(4,3;((1,2),2));(12,1;(1,6),(5,6))]\n"));
}

#[test]
fn query_pair_finds_the_dicyclic_row() {
    let o = mcg(&[
        "query-pair", "--df", "(12,1;(1,6),(5,6))", "--dg", "(4,3;((1,2),2))", "--u", "2", "--r", "6", "--k", "-1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let o = mcg(&[
        "query-pair", "--df", "(12,1;(1,6),(5,6))", "--dg", "(4,1;((1,2),10))", "--u", "2", "--r", "6", "--k", "-1",
    ]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dicyclic_verdicts() {
    let o = mcg(&["dicyclic", "--df", "(20,0;(1,20),(19,20),((1,2),2))"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("clause (i)"));
    let o = mcg(&["dicyclic", "--df", "(20,0;(1,20),(3,20),((1,2),2))"]);
    assert_eq!(o.status.code(), Some(1));
    let o = mcg(&["dicyclic", "--df", "(7,0;(1,7),(2,7),(4,7))"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn lift_of_dicyclic_row() {
    let o = mcg(&["lift", "--meta", DIC6]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("genus 21"));
    assert!(out.contains("[(4,6,1;);(12,1;((1,6),2),((5,6),2))]"), "{out}");
    let o = mcg(&["lift", "--meta", "((2·4,4,-1),0;[(0,1),(1,4),4]_2,[(1,2),(0,1),2]_2)"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bound_reports_and_exit_codes() {
    let o = mcg(&["bound", "--genus", "4"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains(": 16 (M(2,8,4,-1))"), "{out}");
    assert!(out.contains("Dic_4 acts"), "{out}");
    let o = mcg(&["-f", "json", "bound", "--genus", "2", "--to", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["reports"].as_array().unwrap().len(), 2);
}

#[test]
fn csv_is_rejected_outside_classify() {
    let o = mcg(&["-f", "csv", "derive", "--meta", DIC6]);
    assert_eq!(o.status.code(), Some(2));
}
