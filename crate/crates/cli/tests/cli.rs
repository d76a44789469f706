use std::fs;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_donorpdf"))
}

#[test]
fn synth_then_extract() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("corpus");
    let out = dir.path().join("out");
    let status = bin()
        .args(["synth", "--seed", "5", "--count", "5", "--out"])
        .arg(&corpus)
        .status()
        .unwrap();
    assert!(status.success());
    assert!(corpus.join("manifest.json").exists());

    let output = bin()
        .args(["extract", "--workers", "2", "--formats", "json,sql", "--input"])
        .arg(&corpus)
        .arg("--output")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(output.status.code(), Some(0), "{}", String::from_utf8_lossy(&output.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(summary["processed"], 5);
    assert!(out.join("doc_00000.json").exists());
    assert!(out.join("doc_00000.sql").exists());
    assert!(!out.join("doc_00000.documents.csv").exists());
    let journal = fs::read_to_string(out.join("journal.jsonl")).unwrap();
    assert_eq!(journal.lines().count(), 5);
}

#[test]
fn config_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    let input = dir.path().to_str().unwrap();
    assert_eq!(code(&["extract", "--input", input, "--output", input, "--formats", "xml"]), Some(1));
    assert_eq!(code(&["extract", "--input", "/nonexistent/dir", "--output", input]), Some(1));
    assert_eq!(code(&["extract", "--input", input]), Some(1));
    assert_eq!(code(&["synth", "--seed", "1", "--count", "1", "--out", input, "--perturb", "blur"]), Some(1));
}

#[test]
fn all_files_failing_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    fs::create_dir_all(&input).unwrap();
    fs::write(input.join("a.pdf"), b"not a pdf").unwrap();
    fs::write(input.join("b.pdf"), b"%PDF-1.4\ngarbage").unwrap();
    let status = bin()
        .args(["extract", "--input"])
        .arg(&input)
        .arg("--output")
        .arg(dir.path().join("out"))
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}
