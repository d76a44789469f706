use serde::Serialize;

use crate::export::{Column, ColumnKind, Table, TableSchema};
use crate::grammar::Value;

/// Bookkeeping for one source document.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DocumentMeta {
    pub source_file: String,
    /// Root form of the first identified page.
    pub form_id: Option<String>,
    pub page_count: usize,
    pub donor_id: Option<String>,
    pub form_date: Option<chrono::NaiveDate>,
    pub generated_at: Option<String>,
    pub version_note: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PageStatus {
    Parsed,
    Unidentified,
    Failed,
    ImageOnly,
}

impl PageStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PageStatus::Parsed => "parsed",
            PageStatus::Unidentified => "unidentified",
            PageStatus::Failed => "failed",
            PageStatus::ImageOnly => "image_only",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PageRecord {
    pub page: usize,
    pub form_id: Option<String>,
    pub status: PageStatus,
    pub detail: Option<String>,
}

pub fn documents_schema() -> TableSchema {
    let mut s = TableSchema::new(
        "documents",
        vec![
            Column::required("source_file", ColumnKind::Text),
            Column::new("form_id", ColumnKind::Text),
            Column::required("page_count", ColumnKind::Integer),
            Column::new("donor_id", ColumnKind::Text),
            Column::new("form_date", ColumnKind::Date),
            Column::new("generated_at", ColumnKind::Text),
            Column::new("version_note", ColumnKind::Text),
        ],
    );
    s.primary_key = vec!["source_file".into()];
    s
}

pub fn pages_schema() -> TableSchema {
    let mut s = TableSchema::new(
        "pages",
        vec![
            Column::required("source_file", ColumnKind::Text),
            Column::required("page", ColumnKind::Integer),
            Column::new("form_id", ColumnKind::Text),
            Column::required("status", ColumnKind::Text),
            Column::new("detail", ColumnKind::Text),
        ],
    );
    s.primary_key = vec!["source_file".into(), "page".into()];
    s
}

fn text(v: &Option<String>) -> Value {
    v.as_ref().map_or(Value::Missing, |s| Value::Text(s.clone()))
}

impl DocumentMeta {
    pub fn to_table(&self) -> Table {
        let mut t = Table::new(documents_schema());
        t.rows.push(vec![
            Value::Text(self.source_file.clone()),
            text(&self.form_id),
            Value::Number(self.page_count as f64),
            text(&self.donor_id),
            self.form_date.map_or(Value::Missing, Value::Date),
            text(&self.generated_at),
            text(&self.version_note),
        ]);
        t
    }
}

pub fn pages_table(source_file: &str, pages: &[PageRecord]) -> Table {
    let mut t = Table::new(pages_schema());
    for p in pages {
        t.rows.push(vec![
            Value::Text(source_file.to_string()),
            Value::Number(p.page as f64),
            text(&p.form_id),
            Value::Text(p.status.as_str().to_string()),
            text(&p.detail),
        ]);
    }
    t
}
