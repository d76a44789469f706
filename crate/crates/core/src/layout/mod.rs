//! Layout-preserving text: positioned runs from the content stream,
//! snapped onto a fixed-pitch character grid and rendered as lines.

mod grid;
mod runs;

use thiserror::Error;

use crate::pdf::PdfError;

pub use grid::{compose_layout, layout_text, render_lines, CellCollision, LayoutGrid};
pub use runs::{extract_text_runs, runs_from_operators, TextRun, GLYPH_ADVANCE};

pub const DEFAULT_COL_PITCH: f64 = 6.0;
pub const DEFAULT_ROW_PITCH: f64 = 12.0;

/// Why a page cannot be handled as native text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SkipReason {
    UnsupportedFilter(String),
    UnsupportedTextTransform,
    ImageContent,
}

impl std::fmt::Display for SkipReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SkipReason::UnsupportedFilter(name) => write!(f, "unsupported filter {name}"),
            SkipReason::UnsupportedTextTransform => f.write_str("rotated or skewed text"),
            SkipReason::ImageContent => f.write_str("image content"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    #[error("page is image-based: {0}")]
    PageIsImageBased(SkipReason),
    #[error("grid pitch must be positive")]
    InvalidPitch,
    #[error(transparent)]
    Pdf(PdfError),
}

impl From<PdfError> for LayoutError {
    fn from(e: PdfError) -> Self {
        match e {
            PdfError::UnsupportedFilter(name) => LayoutError::PageIsImageBased(SkipReason::UnsupportedFilter(name)),
            other => LayoutError::Pdf(other),
        }
    }
}
