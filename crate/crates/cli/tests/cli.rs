use std::fs;
use std::process::{Command, Output};

fn isocert(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isocert"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn certify_writes_certificate_and_verify_accepts_it() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a4.cert");
    let p = path.to_str().unwrap();
    let out = isocert(&["certify", "--name", "A4", "-o", p]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("verdict: Certified"));
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("isocert-v1\n"));

    let again = dir.path().join("again.cert");
    isocert(&["certify", "--name", "A4", "-o", again.to_str().unwrap()]);
    assert_eq!(fs::read(&path).unwrap(), fs::read(&again).unwrap());

    let out = isocert(&["verify", "--cert", p]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = isocert(&["verify", "--name", "A4", "--cert", p]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tampered_certificate_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a4.cert");
    isocert(&["certify", "--name", "A4", "-o", path.to_str().unwrap()]);
    let text = fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("\"sphere_dimension\":5", "\"sphere_dimension\":7", 1);
    assert_ne!(text, tampered);
    fs::write(&path, tampered).unwrap();
    let out = isocert(&["verify", "--cert", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stdout(&out));
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn qdfree_on_qd3_prints_witness() {
    let out = isocert(&["qdfree", "--name", "Qd3"]);
    assert_eq!(out.status.code(), Some(2));
    let s = stdout(&out);
    assert!(s.contains("p = 3: involved"));
    assert!(s.contains("K = <> of order 1"));
    assert!(s.contains("->"));
}

#[test]
fn rank_of_cyclic_group() {
    let out = isocert(&["rank", "--name", "C6"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("rank: 1"));
}

#[test]
fn verdict_exit_statuses() {
    assert_eq!(isocert(&["certify", "--name", "Qd3"]).status.code(), Some(2));
    assert_eq!(isocert(&["certify", "--name", "Q8"]).status.code(), Some(0));
    // (Z/2)^3 has rank three.
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("c2cubed.txt");
    fs::write(&file, "degree: 6\ngen: (1,2)\ngen: (3,4)\ngen: (5,6)\n").unwrap();
    assert_eq!(isocert(&["certify", "--file", file.to_str().unwrap()]).status.code(), Some(2));
    // A bound of 1 is too small for V4 inside A4.
    let out = isocert(&["certify", "--name", "A4", "--bound", "1"]);
    assert_eq!(out.status.code(), Some(3), "{}", stdout(&out));
    assert!(stdout(&out).contains("SearchInconclusive"));
}

#[test]
fn search_and_fusion_subcommands() {
    let out = isocert(&["search-effective", "--name", "A4", "-p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("multiplicities: [0, 1, 1, 1]"));
    let out = isocert(&["search-effective", "--name", "A4", "-p", "2", "--bound", "2"]);
    assert_eq!(out.status.code(), Some(3));
    let out = isocert(&["fusion", "--name", "A4", "-p", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("block 1: classes [1, 2, 3]"));
    let out = isocert(&["dimfun", "--name", "A4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("S^5"));
    let out = isocert(&["chartab", "--name", "S4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| l.starts_with("chi")).count(), 5);
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(isocert(&["rank", "--name", "nope"]).status.code(), Some(1));
    assert_eq!(isocert(&["rank", "--file", "/nonexistent/group.txt"]).status.code(), Some(1));
    assert_eq!(isocert(&["fusion", "--name", "A4", "-p", "4"]).status.code(), Some(1));
    assert_eq!(isocert(&["fusion", "--name", "A4", "-p", "5"]).status.code(), Some(1));
    assert_eq!(isocert(&["rank", "--name", "A5", "--max-order", "10"]).status.code(), Some(1));
    assert_eq!(isocert(&["rank"]).status.code(), Some(1));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.txt");
    fs::write(&file, "degree: 3\ngen: (1,2,4)\n").unwrap();
    assert_eq!(isocert(&["rank", "--file", file.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn name_and_file_conflict() {
    let out = isocert(&["rank", "--name", "A4", "--file", "x"]);
    assert_eq!(out.status.code(), Some(1));
}
