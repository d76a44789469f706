//! Directory-level driver: every PDF under an input directory goes through
//! the pipeline on a worker pool; outputs mirror the input names and a
//! journal records one line per file.

mod pipeline;

pub use pipeline::{detect_image_based, document_lines, process_document, DocumentOutput, MIN_TEXT_CHARS_PER_PAGE};

use std::fs;
use std::io::Write;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::export::{to_csv, to_json_document, to_sql_dump, ExportError};
use crate::grammar::{GrammarError, Registry};
use crate::layout::{DEFAULT_COL_PITCH, DEFAULT_ROW_PITCH};
use crate::pdf::PdfError;
use crate::raster::{DEFAULT_DPI, DEFAULT_INK_THRESHOLD, MAX_DPI, MIN_DPI};

/// Per-document knobs.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub dpi: u32,
    pub col_pitch: f64,
    pub row_pitch: f64,
    pub ink_threshold: u8,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            dpi: DEFAULT_DPI,
            col_pitch: DEFAULT_COL_PITCH,
            row_pitch: DEFAULT_ROW_PITCH,
            ink_threshold: DEFAULT_INK_THRESHOLD,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub sql: bool,
}

impl Default for Formats {
    fn default() -> Self {
        Formats { csv: true, json: true, sql: true }
    }
}

impl std::str::FromStr for Formats {
    type Err = BatchError;

    /// Comma-separated subset of `csv,json,sql`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut f = Formats { csv: false, json: false, sql: false };
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "csv" => f.csv = true,
                "json" => f.json = true,
                "sql" => f.sql = true,
                other => return Err(BatchError::Config(format!("unknown format `{other}`"))),
            }
        }
        if !(f.csv || f.json || f.sql) {
            return Err(BatchError::Config("no output format selected".into()));
        }
        Ok(f)
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub input: PathBuf,
    pub output: PathBuf,
    pub workers: usize,
    pub pipeline: PipelineConfig,
    pub formats: Formats,
    /// Defaults to `<output>/journal.jsonl`.
    pub journal: Option<PathBuf>,
    /// Grammar directory; the built-in set when `None`.
    pub grammars: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(input: impl Into<PathBuf>, output: impl Into<PathBuf>) -> Self {
        RunConfig {
            input: input.into(),
            output: output.into(),
            workers: 1,
            pipeline: PipelineConfig::default(),
            formats: Formats::default(),
            journal: None,
            grammars: None,
        }
    }

    pub fn validate(&self) -> Result<(), BatchError> {
        let p = &self.pipeline;
        if !(MIN_DPI..=MAX_DPI).contains(&p.dpi) {
            return Err(BatchError::Config(format!("dpi must be within {MIN_DPI}..={MAX_DPI}")));
        }
        if !(p.col_pitch > 0.0 && p.row_pitch > 0.0) {
            return Err(BatchError::Config("grid pitches must be positive".into()));
        }
        if self.workers == 0 {
            return Err(BatchError::Config("workers must be at least 1".into()));
        }
        if !self.input.is_dir() {
            return Err(BatchError::Config(format!("input {} is not a directory", self.input.display())));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum BatchError {
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Grammar(#[from] GrammarError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

/// Why one document produced no records.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum PipelineError {
    #[error("image-based document")]
    ImageBased,
    #[error(transparent)]
    Pdf(#[from] PdfError),
    #[error(transparent)]
    Export(#[from] ExportError),
    #[error("{0}")]
    Io(String),
    #[error("internal error: {0}")]
    Panic(String),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Outcome {
    Processed { forms: Vec<String> },
    Skipped { reason: String },
    Failed { error: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JobReport {
    pub file: String,
    pub outcome: Outcome,
    pub wall_time: f64,
    pub pages: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunSummary {
    pub files: usize,
    pub processed: usize,
    pub skipped: usize,
    pub failed: usize,
    pub pages: usize,
    pub workers: usize,
    pub wall_time: f64,
    pub docs_per_sec: f64,
    #[serde(skip)]
    pub reports: Vec<JobReport>,
}

impl RunSummary {
    /// 2 when there were files and every one failed, else 0.
    pub fn exit_code(&self) -> i32 {
        if self.files > 0 && self.failed == self.files {
            2
        } else {
            0
        }
    }
}

/// PDF files under `dir`, sorted by path.
pub fn collect_inputs(dir: &Path) -> Vec<PathBuf> {
    let mut files: Vec<PathBuf> = walkdir::WalkDir::new(dir)
        .into_iter()
        .filter_map(Result::ok)
        .filter(|e| e.file_type().is_file())
        .map(|e| e.into_path())
        .filter(|p| p.extension().is_some_and(|x| x.eq_ignore_ascii_case("pdf")))
        .collect();
    files.sort();
    files
}

/// Write the selected formats for one document: `<stem>.json`,
/// `<stem>.sql` and `<stem>.<table>.csv`. Returns the written paths.
pub fn write_outputs(out: &DocumentOutput, dir: &Path, stem: &str, formats: Formats) -> Result<Vec<PathBuf>, PipelineError> {
    let io = |p: &Path, e: std::io::Error| PipelineError::Io(format!("{}: {e}", p.display()));
    fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
    let mut written = Vec::new();
    let mut put = |name: String, bytes: Vec<u8>| -> Result<(), PipelineError> {
        let p = dir.join(name);
        fs::write(&p, bytes).map_err(|e| io(&p, e))?;
        written.push(p);
        Ok(())
    };
    if formats.json {
        put(format!("{stem}.json"), to_json_document(&out.tables)?)?;
    }
    if formats.sql {
        put(format!("{stem}.sql"), to_sql_dump(&out.tables)?)?;
    }
    if formats.csv {
        for t in &out.tables {
            put(format!("{stem}.{}.csv", t.name()), to_csv(t)?)?;
        }
    }
    Ok(written)
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    p.downcast_ref::<&str>()
        .map(|s| s.to_string())
        .or_else(|| p.downcast_ref::<String>().cloned())
        .unwrap_or_else(|| "panic".into())
}

fn process_file(path: &Path, config: &RunConfig, registry: &Registry) -> JobReport {
    let start = Instant::now();
    let rel = path.strip_prefix(&config.input).unwrap_or(path);
    let file = rel.display().to_string();
    let work = || -> Result<DocumentOutput, PipelineError> {
        let bytes = fs::read(path).map_err(|e| PipelineError::Io(format!("{}: {e}", path.display())))?;
        let out = process_document(&bytes, &file, registry, &config.pipeline)?;
        let dir = config.output.join(rel.parent().unwrap_or(Path::new("")));
        let stem = rel.file_stem().map_or_else(|| "document".into(), |s| s.to_string_lossy().into_owned());
        write_outputs(&out, &dir, &stem, config.formats)?;
        Ok(out)
    };
    let result = catch_unwind(AssertUnwindSafe(work)).unwrap_or_else(|p| Err(PipelineError::Panic(panic_message(p))));
    let (outcome, pages) = match result {
        Ok(out) => (Outcome::Processed { forms: out.forms() }, out.meta.page_count),
        Err(PipelineError::ImageBased) => (Outcome::Skipped { reason: "image-based document".into() }, 0),
        Err(e) => (Outcome::Failed { error: e.to_string() }, 0),
    };
    JobReport { file, outcome, wall_time: start.elapsed().as_secs_f64(), pages }
}

/// Process every PDF under `config.input`. Per-file problems end up in the
/// journal; only configuration or grammar errors abort the run.
pub fn run(config: &RunConfig) -> Result<RunSummary, BatchError> {
    config.validate()?;
    let registry = match &config.grammars {
        Some(dir) => Registry::from_dir(dir)?,
        None => Registry::builtin()?,
    };
    let io = |p: &Path, e: std::io::Error| BatchError::Io { path: p.display().to_string(), message: e.to_string() };
    fs::create_dir_all(&config.output).map_err(|e| io(&config.output, e))?;
    let journal_path = config.journal.clone().unwrap_or_else(|| config.output.join("journal.jsonl"));
    let journal = fs::File::create(&journal_path).map_err(|e| io(&journal_path, e))?;
    let journal = Mutex::new(std::io::BufWriter::new(journal));

    let inputs = collect_inputs(&config.input);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| BatchError::Config(e.to_string()))?;
    let start = Instant::now();
    let reports: Vec<JobReport> = pool.install(|| {
        inputs
            .par_iter()
            .with_max_len(1)
            .map(|p| {
                let report = process_file(p, config, &registry);
                log::info!("{}: {:?}", report.file, report.outcome);
                if let Ok(line) = serde_json::to_string(&report) {
                    let mut j = journal.lock().unwrap_or_else(|e| e.into_inner());
                    let _ = writeln!(j, "{line}");
                }
                report
            })
            .collect()
    });
    journal
        .into_inner()
        .unwrap_or_else(|e| e.into_inner())
        .flush()
        .map_err(|e| io(&journal_path, e))?;
    let wall_time = start.elapsed().as_secs_f64();
    let count = |f: fn(&Outcome) -> bool| reports.iter().filter(|r| f(&r.outcome)).count();
    let processed = count(|o| matches!(o, Outcome::Processed { .. }));
    Ok(RunSummary {
        files: reports.len(),
        processed,
        skipped: count(|o| matches!(o, Outcome::Skipped { .. })),
        failed: count(|o| matches!(o, Outcome::Failed { .. })),
        pages: reports.iter().map(|r| r.pages).sum(),
        workers: config.workers,
        wall_time,
        docs_per_sec: if wall_time > 0.0 { reports.len() as f64 / wall_time } else { 0.0 },
        reports,
    })
}
