//! Typed records built from parse results and checkbox readings, and their
//! table forms for export.

mod forms;
mod meta;
mod vitals;

pub use forms::{
    bind_checkboxes, build_form_record, build_liver_record, build_preop_record, form_schema, FormRecord,
    LiverDataRecord, PreOpRecord, ANCHOR_RADIUS_PT,
};
pub use meta::{documents_schema, pages_schema, pages_table, DocumentMeta, PageRecord, PageStatus};
pub use vitals::{build_vitals_table, parse_timestamp, vitals_schema, Timestamp, VitalsSeriesRow, VitalsTable};

use serde::Serialize;
use thiserror::Error;

/// Grid geometry used to turn anchor cells back into page points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridGeometry {
    pub col_pitch: f64,
    pub row_pitch: f64,
    pub page_height: f64,
}

impl GridGeometry {
    pub fn new(col_pitch: f64, row_pitch: f64, page_height: f64) -> Self {
        GridGeometry { col_pitch, row_pitch, page_height }
    }

    /// Page point of a grid cell: inverse of the layout rounding.
    pub fn point(&self, row: i64, col: i64) -> (f64, f64) {
        (col as f64 * self.col_pitch, self.page_height - row as f64 * self.row_pitch)
    }
}

/// Problems that do not stop a record from being built.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum RecordDiagnostic {
    NonMonotonicMinute { row: usize, previous: i64, minute: i64 },
    TimestampGap { row: usize, minutes: i64 },
    InvalidTimestamp { row: usize, raw: String },
    UnassignedCheckbox { label: u32, x: f64, y: f64 },
    ConflictingEvidence { field: String, message: String },
    Field { message: String },
}

impl std::fmt::Display for RecordDiagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RecordDiagnostic::NonMonotonicMinute { row, previous, minute } => {
                write!(f, "row {row}: minute {minute} does not follow {previous}")
            }
            RecordDiagnostic::TimestampGap { row, minutes } => {
                write!(f, "row {row}: timestamp step of {minutes} min instead of 1")
            }
            RecordDiagnostic::InvalidTimestamp { row, raw } => write!(f, "row {row}: bad timestamp `{raw}`"),
            RecordDiagnostic::UnassignedCheckbox { label, x, y } => {
                write!(f, "checkbox {label} at ({x:.1}, {y:.1}) has no anchor within {ANCHOR_RADIUS_PT} pt")
            }
            RecordDiagnostic::ConflictingEvidence { field, message } => write!(f, "{field}: {message}"),
            RecordDiagnostic::Field { message } => f.write_str(message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RecordError {
    #[error("expected a `{expected}` page, got `{found}`")]
    WrongForm { expected: String, found: String },
    #[error("expected {expected} checkboxes, detected {found}")]
    CheckboxCountMismatch { expected: usize, found: usize },
}
