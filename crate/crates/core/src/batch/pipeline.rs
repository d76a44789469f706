use std::collections::BTreeSet;

use crate::checkbox::detect_checkboxes;
use crate::export::Table;
use crate::grammar::{parse_form, FormGrammar, Registry, Value};
use crate::layout::{compose_layout, render_lines, runs_from_operators, LayoutError};
use crate::pdf::{classify, load_document, DocumentGraph, OpClass, PdfError, PdfValue};
use crate::records::{
    build_form_record, build_liver_record, build_preop_record, build_vitals_table, pages_table, DocumentMeta,
    GridGeometry, PageRecord, PageStatus,
};

use super::{PipelineConfig, PipelineError};

/// Average text characters per page below which an image-heavy document
/// counts as a scan.
pub const MIN_TEXT_CHARS_PER_PAGE: f64 = 16.0;

/// Everything extracted from one document.
#[derive(Debug, Clone, PartialEq)]
pub struct DocumentOutput {
    pub meta: DocumentMeta,
    pub pages: Vec<PageRecord>,
    /// `documents`, `pages`, then form tables in order of first appearance.
    pub tables: Vec<Table>,
    pub diagnostics: Vec<String>,
}

impl DocumentOutput {
    /// Distinct form ids of the parsed pages, sorted.
    pub fn forms(&self) -> Vec<String> {
        let set: BTreeSet<&str> = self
            .pages
            .iter()
            .filter(|p| p.status == PageStatus::Parsed)
            .filter_map(|p| p.form_id.as_deref())
            .collect();
        set.into_iter().map(String::from).collect()
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name() == name)
    }
}

fn text_chars(ops: &[crate::pdf::Operator]) -> usize {
    runs_from_operators(ops).map_or(0, |runs| runs.iter().map(|r| r.text.chars().filter(|c| !c.is_whitespace()).count()).sum())
}

/// True for scans: no page has text operators, a page's only content
/// stream uses a filter we cannot decode, or most pages paint images and
/// carry almost no text.
pub fn detect_image_based(doc: &DocumentGraph) -> bool {
    let mut any_text = false;
    let mut image_pages = 0usize;
    let mut chars = 0usize;
    for page in &doc.pages {
        match doc.page_operators(page) {
            Ok(ops) => {
                any_text |= ops.iter().any(|o| classify(&o.name) == OpClass::Text);
                chars += text_chars(&ops);
            }
            Err(PdfError::UnsupportedFilter(_)) if page.contents.len() == 1 => return true,
            Err(_) => {}
        }
        if !doc.image_xobjects(page).is_empty() {
            image_pages += 1;
        }
    }
    if !any_text {
        return true;
    }
    let n = doc.pages.len().max(1) as f64;
    image_pages as f64 > n / 2.0 && (chars as f64 / n) < MIN_TEXT_CHARS_PER_PAGE
}

fn info_text(doc: &DocumentGraph, key: &str) -> Option<String> {
    let v = doc.info()?.get(key)?;
    match doc.resolve(v) {
        PdfValue::String(b) => Some(String::from_utf8_lossy(b).into_owned()).filter(|s| !s.is_empty()),
        _ => None,
    }
}

/// `D:YYYYMMDDHHmmSS...` as `YYYY-MM-DD HH:MM:SS`; other forms verbatim.
fn pdf_date(raw: &str) -> String {
    let d = raw.strip_prefix("D:").unwrap_or(raw);
    let digits: String = d.chars().take_while(char::is_ascii_digit).collect();
    if digits.len() >= 14 {
        format!(
            "{}-{}-{} {}:{}:{}",
            &digits[0..4],
            &digits[4..6],
            &digits[6..8],
            &digits[8..10],
            &digits[10..12],
            &digits[12..14]
        )
    } else {
        raw.to_string()
    }
}

#[derive(Default)]
struct Tables {
    tables: Vec<Table>,
}

impl Tables {
    fn append(&mut self, mut t: Table) {
        match self.tables.iter_mut().find(|x| x.schema.name == t.schema.name) {
            Some(existing) => existing.rows.append(&mut t.rows),
            None => self.tables.push(t),
        }
    }
}

struct PageCtx<'a> {
    doc: &'a DocumentGraph,
    registry: &'a Registry,
    config: &'a PipelineConfig,
}

enum PageResult {
    Parsed { grammar: String, tables: Vec<Table>, scalars: Vec<(String, Value)>, diagnostics: Vec<String> },
    Status(PageStatus, String),
}

fn process_page(ctx: &PageCtx, index: usize) -> PageResult {
    let page = &ctx.doc.pages[index];
    let ops = match ctx.doc.page_operators(page) {
        Ok(ops) => ops,
        Err(PdfError::UnsupportedFilter(f)) => return PageResult::Status(PageStatus::ImageOnly, format!("filter {f}")),
        Err(e) => return PageResult::Status(PageStatus::Failed, e.to_string()),
    };
    let runs = match runs_from_operators(&ops) {
        Ok(r) => r,
        Err(LayoutError::PageIsImageBased(r)) => return PageResult::Status(PageStatus::ImageOnly, r.to_string()),
        Err(e) => return PageResult::Status(PageStatus::Failed, e.to_string()),
    };
    if runs.is_empty() {
        let status = if ctx.doc.image_xobjects(page).is_empty() { PageStatus::Unidentified } else { PageStatus::ImageOnly };
        return PageResult::Status(status, "no text".into());
    }
    let cfg = ctx.config;
    let grid = match compose_layout(&runs, page.height(), cfg.col_pitch, cfg.row_pitch) {
        Ok(g) => g,
        Err(e) => return PageResult::Status(PageStatus::Failed, e.to_string()),
    };
    let lines = render_lines(&grid);
    let Some(grammar) = ctx.registry.identify(&lines) else {
        return PageResult::Status(PageStatus::Unidentified, "no known title".into());
    };
    let parse = match parse_form(grammar, &lines) {
        Ok(p) => p,
        Err(f) => {
            let detail = format!("{}: stopped at line {}: {:?}", grammar.form_id, f.first_unmatched_line.0, f.kind);
            return PageResult::Status(PageStatus::Failed, detail);
        }
    };
    let checkboxes = if grammar.anchor_fields().is_empty() {
        Vec::new()
    } else {
        detect_checkboxes(&ops, page, cfg.dpi, cfg.ink_threshold).observations
    };
    let geometry = GridGeometry::new(cfg.col_pitch, cfg.row_pitch, page.height());
    let scalars: Vec<(String, Value)> =
        grammar.scalar_fields().iter().map(|f| (f.name.clone(), parse.value(&f.name).clone())).collect();
    let mut diagnostics: Vec<String> = grid.collisions.iter().map(|c| format!("page {index}: grid collision at {},{}", c.row, c.col)).collect();
    let mut tables = Vec::new();
    let record = match grammar.form_id.as_str() {
        "dcd_flowsheet" => match build_vitals_table(&parse) {
            Ok(v) => {
                diagnostics.extend(v.diagnostics.iter().map(|d| format!("page {index}: {d}")));
                tables.push(v.to_table());
                None
            }
            Err(e) => return PageResult::Status(PageStatus::Failed, e.to_string()),
        },
        "pre_operative_management" => Some(build_preop_record(grammar, &parse, &checkboxes, &geometry)),
        "liver_data" => Some(build_liver_record(grammar, &parse, &checkboxes)),
        _ => Some(build_form_record(grammar, &parse, &checkboxes, &geometry)),
    };
    if let Some(record) = record {
        let mut record = match record {
            Ok(r) => r,
            Err(e) => return PageResult::Status(PageStatus::Failed, e.to_string()),
        };
        record.page = index;
        diagnostics.extend(record.diagnostics.iter().map(|d| format!("page {index}: {d}")));
        if let Some(t) = record.to_table(grammar) {
            tables.push(t);
        }
    }
    PageResult::Parsed { grammar: grammar.form_id.clone(), tables, scalars, diagnostics }
}

/// Rendered layout lines of every page, for grammar evaluation. Pages
/// without usable text give an empty list.
pub fn document_lines(bytes: &[u8], config: &PipelineConfig) -> Result<Vec<Vec<String>>, PipelineError> {
    let doc = load_document(bytes)?;
    Ok(doc
        .pages
        .iter()
        .map(|page| {
            doc.page_operators(page)
                .ok()
                .and_then(|ops| runs_from_operators(&ops).ok())
                .and_then(|runs| compose_layout(&runs, page.height(), config.col_pitch, config.row_pitch).ok())
                .map_or_else(Vec::new, |g| render_lines(&g))
        })
        .collect())
}

fn root_form(g: &FormGrammar) -> String {
    g.part_of.clone().unwrap_or_else(|| g.form_id.clone())
}

/// Full per-document pipeline: load, skip scans, then per page layout,
/// identify, parse, detect checkboxes and build records.
pub fn process_document(
    bytes: &[u8],
    source_file: &str,
    registry: &Registry,
    config: &PipelineConfig,
) -> Result<DocumentOutput, PipelineError> {
    let doc = load_document(bytes)?;
    if detect_image_based(&doc) {
        return Err(PipelineError::ImageBased);
    }
    let ctx = PageCtx { doc: &doc, registry, config };
    let mut meta = DocumentMeta {
        source_file: source_file.to_string(),
        form_id: None,
        page_count: doc.pages.len(),
        donor_id: None,
        form_date: None,
        generated_at: info_text(&doc, "CreationDate").map(|d| pdf_date(&d)),
        version_note: info_text(&doc, "Subject"),
    };
    let mut pages = Vec::new();
    let mut tables = Tables::default();
    let mut diagnostics: Vec<String> = doc.diagnostics.clone();
    for index in 0..doc.pages.len() {
        match process_page(&ctx, index) {
            PageResult::Parsed { grammar, tables: ts, scalars, diagnostics: d } => {
                let g = registry.get(&grammar).expect("identified grammar is registered");
                meta.form_id.get_or_insert_with(|| root_form(g));
                for (name, v) in &scalars {
                    match (name.as_str(), v) {
                        ("donor_id", Value::Text(s)) if meta.donor_id.is_none() => meta.donor_id = Some(s.clone()),
                        (n, Value::Date(d)) if n.ends_with("_date") && meta.form_date.is_none() => meta.form_date = Some(*d),
                        _ => {}
                    }
                }
                ts.into_iter().for_each(|t| tables.append(t));
                diagnostics.extend(d);
                pages.push(PageRecord { page: index, form_id: Some(grammar), status: PageStatus::Parsed, detail: None });
            }
            PageResult::Status(status, detail) => {
                diagnostics.push(format!("page {index}: {detail}"));
                pages.push(PageRecord { page: index, form_id: None, status, detail: Some(detail) });
            }
        }
    }
    let mut all = vec![meta.to_table(), pages_table(source_file, &pages)];
    all.extend(tables.tables);
    Ok(DocumentOutput { meta, pages, tables: all, diagnostics })
}
