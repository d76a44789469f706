use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use donorpdf::batch::{collect_inputs, run, Outcome, RunConfig};
use donorpdf::synth::{generate, image_based_pdf, CorpusSpec};

/// Every output file except the journal, by relative path.
fn artifacts(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file() && e.file_name() != "journal.jsonl")
        .map(|e| (e.path().strip_prefix(dir).unwrap().display().to_string(), fs::read(e.path()).unwrap()))
        .collect()
}

fn run_with(input: &Path, output: &Path, workers: usize) -> donorpdf::batch::RunSummary {
    let mut c = RunConfig::new(input, output);
    c.workers = workers;
    run(&c).unwrap()
}

#[test]
fn artifacts_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    generate(&CorpusSpec::new(21, 12), &input).unwrap();
    let one = run_with(&input, &dir.path().join("w1"), 1);
    let four = run_with(&input, &dir.path().join("w4"), 4);
    assert_eq!(one.processed, 12);
    assert_eq!(four.processed, 12);
    let a = artifacts(&dir.path().join("w1"));
    assert!(a.len() > 12 * 3);
    assert_eq!(a, artifacts(&dir.path().join("w4")));
}

#[test]
fn bad_inputs_fail_alone() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("in");
    generate(&CorpusSpec::new(4, 3), &input).unwrap();
    fs::write(input.join("empty.pdf"), b"").unwrap();
    fs::write(input.join("garbage.pdf"), b"%PDF-1.4\n1 0 obj << /Type /Catalog /Pages 9 0 R >> endobj\ntrailer << /Root 1 0 R >>").unwrap();
    let good = fs::read(input.join("doc_00000.pdf")).unwrap();
    fs::write(input.join("truncated.pdf"), &good[..good.len() / 2]).unwrap();
    fs::write(input.join("scan.pdf"), image_based_pdf(2)).unwrap();
    assert_eq!(collect_inputs(&input).len(), 7);

    let out = dir.path().join("out");
    let summary = run_with(&input, &out, 4);
    assert_eq!(summary.files, 7);
    assert_eq!(summary.skipped, 1);
    assert_eq!(summary.exit_code(), 0);
    for r in &summary.reports {
        if r.file.starts_with("doc_") {
            assert!(matches!(r.outcome, Outcome::Processed { .. }), "{}: {:?}", r.file, r.outcome);
            assert!(out.join(r.file.replace(".pdf", ".json")).exists());
        }
    }
    assert!(summary.failed >= 2);
    assert_eq!(summary.processed + summary.skipped + summary.failed, 7);
    let journal = fs::read_to_string(out.join("journal.jsonl")).unwrap();
    assert_eq!(journal.lines().count(), 7);
    for line in journal.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["file"].is_string() && v["outcome"]["status"].is_string());
    }
}
