//! Synthetic form corpus with ground truth, for end-to-end accuracy checks.
//!
//! Every document is reproducible from `(seed, index)`: content and layout
//! draw from separate ChaCha streams, so re-rendering a document with
//! perturbations keeps its values.

pub mod forms;
pub mod page;

use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value as Json};
use thiserror::Error;

use crate::batch::DocumentOutput;
use crate::export::{to_json, ExportError, Table};
use crate::grammar::Registry;
use crate::pdf::writer::PdfWriter;
use crate::pdf::{Dict, PdfValue};
use crate::records::{pages_table, DocumentMeta, PageRecord, PageStatus};

pub use forms::{generate_content, long_flowsheet, example_dcd_content, example_vitals_rows, DocContent, PageContent, PageTruth, KINDS};
pub use page::{expected_lines, render_page, write_pdf, CheckboxGlyph, Page, PageBuilder, RenderOptions};

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("unknown perturbation `{0}`")]
    UnknownPerturbation(String),
    #[error("invalid corpus spec: {0}")]
    InvalidSpec(String),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error(transparent)]
    Export(#[from] ExportError),
}

fn io_err(path: &Path, e: impl fmt::Display) -> SynthError {
    SynthError::Io { path: path.display().to_string(), message: e.to_string() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Perturbation {
    AltLabels,
    ShiftedColumns,
    ExtraBlankLines,
    GrayRules,
}

impl Perturbation {
    pub const ALL: [Perturbation; 4] =
        [Perturbation::AltLabels, Perturbation::ShiftedColumns, Perturbation::ExtraBlankLines, Perturbation::GrayRules];

    pub fn as_str(self) -> &'static str {
        match self {
            Perturbation::AltLabels => "alt-labels",
            Perturbation::ShiftedColumns => "shifted-columns",
            Perturbation::ExtraBlankLines => "extra-blank-lines",
            Perturbation::GrayRules => "gray-rules",
        }
    }
}

impl fmt::Display for Perturbation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Perturbation {
    type Err = SynthError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase().replace('_', "-");
        Perturbation::ALL
            .into_iter()
            .find(|p| p.as_str() == key)
            .ok_or_else(|| SynthError::UnknownPerturbation(s.to_string()))
    }
}

pub fn render_options(perturbations: &[Perturbation]) -> RenderOptions {
    RenderOptions {
        alt_labels: perturbations.contains(&Perturbation::AltLabels),
        shifted_columns: perturbations.contains(&Perturbation::ShiftedColumns),
        extra_blank_lines: perturbations.contains(&Perturbation::ExtraBlankLines),
        gray_rules: perturbations.contains(&Perturbation::GrayRules),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    /// Document kinds and their proportions, summing to 1.
    pub form_mix: Vec<(String, f64)>,
    pub perturbations: Vec<Perturbation>,
    /// Share of documents rendered with `perturbations`.
    pub perturb_fraction: f64,
}

impl CorpusSpec {
    /// Clean corpus with every kind equally likely.
    pub fn new(seed: u64, count: usize) -> Self {
        let share = 1.0 / KINDS.len() as f64;
        CorpusSpec {
            seed,
            count,
            form_mix: KINDS.iter().map(|k| (k.to_string(), share)).collect(),
            perturbations: Vec::new(),
            perturb_fraction: 0.0,
        }
    }

    fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: String| Err(SynthError::InvalidSpec(m));
        if self.count == 0 {
            return bad("count must be at least 1".into());
        }
        if self.form_mix.is_empty() {
            return bad("empty form mix".into());
        }
        for (kind, w) in &self.form_mix {
            if !KINDS.contains(&kind.as_str()) {
                return bad(format!("unknown kind `{kind}`"));
            }
            if !(w.is_finite() && *w >= 0.0) {
                return bad(format!("weight {w} for `{kind}`"));
            }
        }
        let total: f64 = self.form_mix.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-6 {
            return bad(format!("form mix proportions sum to {total}"));
        }
        if !(0.0..=1.0).contains(&self.perturb_fraction) {
            return bad(format!("perturb fraction {}", self.perturb_fraction));
        }
        Ok(())
    }

    /// Kind of document `index` by cumulative proportion, so the mix is
    /// exact up to rounding and independent of the rng.
    pub fn kind_of(&self, index: usize) -> &str {
        let p = (index as f64 + 0.5) / self.count.max(1) as f64;
        let mut acc = 0.0;
        for (kind, w) in &self.form_mix {
            acc += w;
            if p < acc {
                return kind;
            }
        }
        &self.form_mix.last().expect("validated non-empty").0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub index: usize,
    pub kind: String,
    pub file: String,
    pub truth: String,
    pub perturbations: Vec<Perturbation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub documents: Vec<ManifestEntry>,
}

/// Expected extraction of one generated document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub source_file: String,
    pub form_id: String,
    /// Checked state of every drawn box, page then reading order.
    pub checkboxes: Vec<bool>,
    /// Table name to array of row objects, as the JSON export writes them.
    pub tables: Map<String, Json>,
    pub perturbations: Vec<Perturbation>,
}

fn content_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * index as u64);
    rng
}

fn layout_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(2 * index as u64 + 1);
    rng
}

/// Content of document `index` of a corpus with this seed.
pub fn document_content(seed: u64, index: usize, kind: &str) -> Result<DocContent, SynthError> {
    generate_content(kind, &mut content_rng(seed, index))
        .ok_or_else(|| SynthError::InvalidSpec(format!("unknown kind `{kind}`")))
}

fn info_dict(content: &DocContent) -> Dict {
    let mut info = Dict::new();
    let created = content.created.format("D:%Y%m%d%H%M%S").to_string();
    info.insert("CreationDate".into(), PdfValue::String(created.into_bytes()));
    info.insert("Subject".into(), PdfValue::String(content.version_note.clone().into_bytes()));
    info.insert("Producer".into(), PdfValue::String(b"donorpdf synth".to_vec()));
    info
}

/// PDF bytes for a document.
pub fn render_document(content: &DocContent, options: &RenderOptions, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let pages: Vec<Vec<u8>> = content.pages.iter().map(|p| render_page(&p.page, options, rng)).collect();
    write_pdf(&pages, info_dict(content))
}

/// Tables a correct extraction of `content` produces, in pipeline order.
pub fn truth_tables(content: &DocContent, source_file: &str, registry: &Registry) -> Vec<Table> {
    let meta = DocumentMeta {
        source_file: source_file.to_string(),
        form_id: Some(content.kind.clone()),
        page_count: content.pages.len(),
        donor_id: content.donor_id.clone(),
        form_date: content.form_date,
        generated_at: Some(content.created.format("%Y-%m-%d %H:%M:%S").to_string()),
        version_note: Some(content.version_note.clone()),
    };
    let pages: Vec<PageRecord> = content
        .pages
        .iter()
        .enumerate()
        .map(|(i, p)| PageRecord { page: i, form_id: Some(p.form_id.clone()), status: PageStatus::Parsed, detail: None })
        .collect();
    let mut tables = vec![meta.to_table(), pages_table(source_file, &pages)];
    let mut push = |t: Table| match tables.iter_mut().find(|x| x.schema.name == t.schema.name) {
        Some(existing) => existing.rows.extend(t.rows),
        None => tables.push(t),
    };
    for p in &content.pages {
        match &p.truth {
            PageTruth::Vitals(v) => push(v.to_table()),
            PageTruth::Form(r) => {
                if let Some(t) = registry.get(&r.form_id).and_then(|g| r.to_table(g)) {
                    push(t);
                }
            }
            PageTruth::Cover => {}
        }
    }
    tables
}

fn tables_json(tables: &[Table]) -> Result<Map<String, Json>, ExportError> {
    tables.iter().map(|t| Ok((t.name().to_string(), to_json(t)?))).collect()
}

pub fn ground_truth(
    content: &DocContent,
    source_file: &str,
    registry: &Registry,
    perturbations: &[Perturbation],
) -> Result<GroundTruth, SynthError> {
    Ok(GroundTruth {
        source_file: source_file.to_string(),
        form_id: content.kind.clone(),
        checkboxes: content.checkboxes.clone(),
        tables: tables_json(&truth_tables(content, source_file, registry))?,
        perturbations: perturbations.to_vec(),
    })
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), SynthError> {
    fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn write_entry(
    out_dir: &Path,
    seed: u64,
    index: usize,
    kind: &str,
    perturbations: &[Perturbation],
    registry: &Registry,
) -> Result<ManifestEntry, SynthError> {
    let content = document_content(seed, index, kind)?;
    let file = format!("doc_{index:05}.pdf");
    let truth = format!("doc_{index:05}.truth.json");
    let pdf = render_document(&content, &render_options(perturbations), &mut layout_rng(seed, index));
    write(&out_dir.join(&file), &pdf)?;
    let gt = ground_truth(&content, &file, registry, perturbations)?;
    let json = serde_json::to_vec_pretty(&gt).map_err(|e| io_err(&out_dir.join(&truth), e))?;
    write(&out_dir.join(&truth), &json)?;
    Ok(ManifestEntry { index, kind: kind.to_string(), file, truth, perturbations: perturbations.to_vec() })
}

fn write_manifest(out_dir: &Path, manifest: &Manifest) -> Result<(), SynthError> {
    let path = out_dir.join("manifest.json");
    let json = serde_json::to_vec_pretty(manifest).map_err(|e| io_err(&path, e))?;
    write(&path, &json)
}

pub fn read_manifest(out_dir: &Path) -> Result<Manifest, SynthError> {
    let path = out_dir.join("manifest.json");
    let bytes = fs::read(&path).map_err(|e| io_err(&path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| io_err(&path, e))
}

pub fn read_truth(out_dir: &Path, entry: &ManifestEntry) -> Result<GroundTruth, SynthError> {
    let path = out_dir.join(&entry.truth);
    let bytes = fs::read(&path).map_err(|e| io_err(&path, e))?;
    serde_json::from_slice(&bytes).map_err(|e| io_err(&path, e))
}

/// Indices chosen for perturbation: exactly `round(fraction * n)` of them.
fn perturbed_indices(n: usize, fraction: f64, seed: u64) -> Vec<usize> {
    let k = ((fraction * n as f64).round() as usize).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let mut picked = sample(&mut rng, n, k).into_vec();
    picked.sort_unstable();
    picked
}

/// Write `spec.count` documents with truth files and a manifest to `out_dir`.
pub fn generate(spec: &CorpusSpec, out_dir: &Path) -> Result<Manifest, SynthError> {
    spec.validate()?;
    fs::create_dir_all(out_dir).map_err(|e| io_err(out_dir, e))?;
    let registry = Registry::builtin().map_err(|e| SynthError::InvalidSpec(e.to_string()))?;
    let perturbed = if spec.perturbations.is_empty() {
        Vec::new()
    } else {
        perturbed_indices(spec.count, spec.perturb_fraction, spec.seed)
    };
    let mut documents = Vec::with_capacity(spec.count);
    for index in 0..spec.count {
        let ps: &[Perturbation] = if perturbed.binary_search(&index).is_ok() { &spec.perturbations } else { &[] };
        documents.push(write_entry(out_dir, spec.seed, index, spec.kind_of(index), ps, &registry)?);
    }
    let manifest = Manifest { seed: spec.seed, documents };
    write_manifest(out_dir, &manifest)?;
    Ok(manifest)
}

/// Re-render a `fraction` of an existing corpus with `perturbations`,
/// keeping every document's values. An empty set is a no-op.
pub fn perturb(
    manifest: &Manifest,
    out_dir: &Path,
    perturbations: &[Perturbation],
    fraction: f64,
    seed: u64,
) -> Result<Manifest, SynthError> {
    if perturbations.is_empty() {
        return Ok(manifest.clone());
    }
    if !(0.0..=1.0).contains(&fraction) {
        return Err(SynthError::InvalidSpec(format!("perturb fraction {fraction}")));
    }
    let registry = Registry::builtin().map_err(|e| SynthError::InvalidSpec(e.to_string()))?;
    let mut out = manifest.clone();
    for i in perturbed_indices(manifest.documents.len(), fraction, seed) {
        let e = &manifest.documents[i];
        let mut ps: Vec<Perturbation> = e.perturbations.iter().chain(perturbations).copied().collect();
        ps.sort_unstable();
        ps.dedup();
        out.documents[i] = write_entry(out_dir, manifest.seed, e.index, &e.kind, &ps, &registry)?;
    }
    write_manifest(out_dir, &out)?;
    Ok(out)
}

/// Per-field agreement between truth and an extraction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Score {
    pub fields: usize,
    pub correct: usize,
}

impl Score {
    pub fn accuracy(&self) -> f64 {
        if self.fields == 0 {
            1.0
        } else {
            self.correct as f64 / self.fields as f64
        }
    }

    pub fn is_perfect(&self) -> bool {
        self.correct == self.fields
    }

    pub fn add(&mut self, other: Score) {
        self.fields += other.fields;
        self.correct += other.correct;
    }
}

fn same(a: &Json, b: &Json) -> bool {
    match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => (x - y).abs() <= 1e-9 * x.abs().max(1.0),
        _ => a == b,
    }
}

/// Compare every truth cell with the extracted cell at the same table, row
/// and column. Missing rows count all their fields wrong; surplus rows
/// count one wrong field each.
pub fn score_tables(truth: &Map<String, Json>, extracted: &Map<String, Json>) -> Score {
    let mut score = Score::default();
    let empty = Vec::new();
    for (name, rows) in truth {
        let want = rows.as_array().unwrap_or(&empty);
        let got = extracted.get(name).and_then(Json::as_array).unwrap_or(&empty);
        for (i, row) in want.iter().enumerate() {
            let Some(obj) = row.as_object() else { continue };
            let other = got.get(i).and_then(Json::as_object);
            for (col, v) in obj {
                score.fields += 1;
                if other.and_then(|o| o.get(col)).is_some_and(|g| same(v, g)) {
                    score.correct += 1;
                }
            }
        }
        if got.len() > want.len() {
            score.fields += got.len() - want.len();
        }
    }
    score
}

pub fn score_output(truth: &GroundTruth, output: &DocumentOutput) -> Result<Score, ExportError> {
    Ok(score_tables(&truth.tables, &tables_json(&output.tables)?))
}

/// Scan-like PDF: every page a single image, no text.
pub fn image_based_pdf(pages: usize) -> Vec<u8> {
    let mut w = PdfWriter::new();
    for _ in 0..pages.max(1) {
        w.add_image_page(page::PAGE_WIDTH, page::PAGE_HEIGHT);
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::batch::{process_document, PipelineConfig};

    fn roundtrip(kind: &str, seed: u64, index: usize, ps: &[Perturbation]) -> (Score, DocumentOutput) {
        let registry = Registry::builtin().unwrap();
        let content = document_content(seed, index, kind).unwrap();
        let pdf = render_document(&content, &render_options(ps), &mut layout_rng(seed, index));
        let truth = ground_truth(&content, "doc.pdf", &registry, ps).unwrap();
        let out = process_document(&pdf, "doc.pdf", &registry, &PipelineConfig::default()).unwrap();
        (score_output(&truth, &out).unwrap(), out)
    }

    #[test]
    fn every_kind_extracts_exactly() {
        for kind in KINDS {
            for index in 0..8 {
                let (score, out) = roundtrip(kind, 7, index, &[]);
                assert!(score.is_perfect(), "{kind} #{index}: {score:?}\n{:#?}", out.diagnostics);
            }
        }
    }

    #[test]
    fn gray_rules_do_not_change_values() {
        for kind in ["dcd_flowsheet", "liver_data"] {
            for index in 0..4 {
                let (score, out) = roundtrip(kind, 11, index, &[Perturbation::GrayRules]);
                assert!(score.is_perfect(), "{kind} #{index}: {score:?}\n{:#?}", out.diagnostics);
            }
        }
    }

    #[test]
    fn content_is_reproducible() {
        let a = document_content(3, 5, "dcd_flowsheet").unwrap();
        let b = document_content(3, 5, "dcd_flowsheet").unwrap();
        assert_eq!(a, b);
        assert_ne!(a, document_content(3, 6, "dcd_flowsheet").unwrap());
    }

    #[test]
    fn kind_mix_is_proportional() {
        let mut spec = CorpusSpec::new(1, 100);
        spec.form_mix = vec![("liver_data".into(), 0.75), ("referral_worksheet".into(), 0.25)];
        let livers = (0..100).filter(|&i| spec.kind_of(i) == "liver_data").count();
        assert_eq!(livers, 75);
    }

    #[test]
    fn perturbation_names_parse() {
        for p in Perturbation::ALL {
            assert_eq!(p.as_str().parse::<Perturbation>().unwrap(), p);
        }
        assert_eq!("Gray_Rules".parse::<Perturbation>().unwrap(), Perturbation::GrayRules);
        assert!("blur".parse::<Perturbation>().is_err());
    }

    #[test]
    fn perturbed_share_is_exact() {
        assert_eq!(perturbed_indices(200, 0.3, 9).len(), 60);
        assert_eq!(perturbed_indices(7, 0.5, 9).len(), 4);
        assert!(perturbed_indices(5, 0.0, 9).is_empty());
    }

    #[test]
    fn image_pdf_is_skipped() {
        let registry = Registry::builtin().unwrap();
        let err = process_document(&image_based_pdf(2), "scan.pdf", &registry, &PipelineConfig::default());
        assert!(matches!(err, Err(crate::batch::PipelineError::ImageBased)));
    }

    #[test]
    fn score_counts_missing_and_surplus_rows() {
        let truth: Map<String, Json> = serde_json::from_str(r#"{"t":[{"a":1,"b":"x"},{"a":2,"b":"y"}]}"#).unwrap();
        let got: Map<String, Json> = serde_json::from_str(r#"{"t":[{"a":1.0,"b":"x"}]}"#).unwrap();
        assert_eq!(score_tables(&truth, &got), Score { fields: 4, correct: 2 });
        let got: Map<String, Json> = serde_json::from_str(r#"{"t":[{"a":1,"b":"x"},{"a":2,"b":"y"},{"a":3,"b":"z"}]}"#).unwrap();
        assert_eq!(score_tables(&truth, &got), Score { fields: 5, correct: 4 });
    }

    #[test]
    fn single_dcd_document_matches_its_truth() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = CorpusSpec::new(42, 1);
        spec.form_mix = vec![("dcd_flowsheet".into(), 1.0)];
        let manifest = generate(&spec, dir.path()).unwrap();
        let entry = &manifest.documents[0];
        let truth = read_truth(dir.path(), entry).unwrap();
        let registry = Registry::builtin().unwrap();
        let pdf = fs::read(dir.path().join(&entry.file)).unwrap();
        let out = process_document(&pdf, &entry.file, &registry, &PipelineConfig::default()).unwrap();
        assert!(score_output(&truth, &out).unwrap().is_perfect());
    }

    #[test]
    fn header_only_vitals_table() {
        let registry = Registry::builtin().unwrap();
        let content = forms::dcd_flowsheet(&mut content_rng(1, 0), Some(0));
        let pdf = render_document(&content, &RenderOptions::default(), &mut layout_rng(1, 0));
        let out = process_document(&pdf, "d.pdf", &registry, &PipelineConfig::default()).unwrap();
        assert_eq!(out.table("dcd_flowsheet").unwrap().rows.len(), 0);
        let truth = ground_truth(&content, "d.pdf", &registry, &[]).unwrap();
        assert!(score_output(&truth, &out).unwrap().is_perfect());
    }

    #[test]
    fn liver_states_survive_detection() {
        let states = [true, false, true, false, false, false, true, false];
        let registry = Registry::builtin().unwrap();
        let content = forms::liver(&mut content_rng(2, 0), Some(states));
        assert_eq!(content.checkboxes, states);
        let pdf = render_document(&content, &RenderOptions::default(), &mut layout_rng(2, 0));
        let out = process_document(&pdf, "d.pdf", &registry, &PipelineConfig::default()).unwrap();
        let json = to_json(out.table("liver_data").unwrap()).unwrap();
        let row = &json[0];
        let got: Vec<bool> = forms::LIVER_BOXES.iter().map(|(name, _)| row[*name].as_bool().unwrap()).collect();
        assert_eq!(got, states);
    }

    #[test]
    fn generation_is_byte_identical_and_loads_cleanly() {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        let mut spec = CorpusSpec::new(9, 10);
        spec.perturbations = Perturbation::ALL.to_vec();
        spec.perturb_fraction = 0.5;
        let m = generate(&spec, a.path()).unwrap();
        assert_eq!(m, generate(&spec, b.path()).unwrap());
        assert_eq!(m.documents.iter().filter(|e| !e.perturbations.is_empty()).count(), 5);
        for e in &m.documents {
            let x = fs::read(a.path().join(&e.file)).unwrap();
            assert_eq!(x, fs::read(b.path().join(&e.file)).unwrap());
            assert_eq!(fs::read(a.path().join(&e.truth)).unwrap(), fs::read(b.path().join(&e.truth)).unwrap());
            let doc = crate::pdf::load_document(&x).unwrap();
            assert!(doc.diagnostics.is_empty(), "{}: {:?}", e.file, doc.diagnostics);
        }
    }

    #[test]
    fn empty_perturbation_set_leaves_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let m = generate(&CorpusSpec::new(3, 4), dir.path()).unwrap();
        let before = fs::read(dir.path().join("manifest.json")).unwrap();
        assert_eq!(perturb(&m, dir.path(), &[], 1.0, 1).unwrap(), m);
        assert_eq!(fs::read(dir.path().join("manifest.json")).unwrap(), before);
    }

    #[test]
    fn perturb_keeps_values() {
        let dir = tempfile::tempdir().unwrap();
        let m = generate(&CorpusSpec::new(4, 10), dir.path()).unwrap();
        let before: Vec<GroundTruth> = m.documents.iter().map(|e| read_truth(dir.path(), e).unwrap()).collect();
        let p = perturb(&m, dir.path(), &[Perturbation::ExtraBlankLines], 0.3, 8).unwrap();
        assert_eq!(p.documents.iter().filter(|e| !e.perturbations.is_empty()).count(), 3);
        for (e, old) in p.documents.iter().zip(&before) {
            assert_eq!(read_truth(dir.path(), e).unwrap().tables, old.tables);
        }
    }

    #[test]
    fn spec_validation() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = CorpusSpec::new(1, 0);
        assert!(matches!(generate(&spec, dir.path()), Err(SynthError::InvalidSpec(_))));
        spec.count = 1;
        spec.form_mix = vec![("liver_data".into(), 0.5)];
        assert!(matches!(generate(&spec, dir.path()), Err(SynthError::InvalidSpec(_))));
        spec.form_mix = vec![("tax_return".into(), 1.0)];
        assert!(matches!(generate(&spec, dir.path()), Err(SynthError::InvalidSpec(_))));
    }

    #[test]
    fn alt_labels_form_one_failure_cluster() {
        let dir = tempfile::tempdir().unwrap();
        let mut spec = CorpusSpec::new(12, 20);
        spec.form_mix = vec![("dcd_flowsheet".into(), 1.0)];
        spec.perturbations = vec![Perturbation::AltLabels];
        spec.perturb_fraction = 0.1;
        let m = generate(&spec, dir.path()).unwrap();
        let registry = Registry::builtin().unwrap();
        let grammar = registry.get("pre_operative_management").unwrap();
        let corpus: Vec<Vec<String>> = m
            .documents
            .iter()
            .map(|e| {
                let pdf = fs::read(dir.path().join(&e.file)).unwrap();
                crate::batch::document_lines(&pdf, &PipelineConfig::default()).unwrap().remove(0)
            })
            .collect();
        let report = crate::grammar::evaluate_grammar(grammar, &corpus).unwrap();
        assert_eq!(report.parsed, 18);
        assert_eq!(report.clusters.len(), 1);
        assert!(report.clusters[0].example_line.contains("Dose:"));
    }
}
