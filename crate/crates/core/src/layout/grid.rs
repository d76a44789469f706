use serde::Serialize;

use super::{LayoutError, TextRun};

/// Two runs claimed the same cell; the later run's character was kept.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellCollision {
    pub row: usize,
    pub col: usize,
    pub kept: char,
    pub overwritten: char,
    pub earlier_run: usize,
    pub later_run: usize,
}

/// Fixed-pitch character approximation of a page, top row first.
#[derive(Debug, Clone, PartialEq)]
pub struct LayoutGrid {
    pub cells: Vec<Vec<char>>,
    pub row_pitch: f64,
    pub col_pitch: f64,
    pub collisions: Vec<CellCollision>,
}

impl LayoutGrid {
    pub fn rows(&self) -> usize {
        self.cells.len()
    }

    pub fn cols(&self) -> usize {
        self.cells.first().map_or(0, Vec::len)
    }
}

/// Place each run at `row = round((page_height - y) / row_pitch)`,
/// `col = round(x / col_pitch)`. Ties round away from zero. Runs above the
/// page top or left of the page edge are clamped to row/column 0.
pub fn compose_layout(
    runs: &[TextRun],
    page_height: f64,
    col_pitch: f64,
    row_pitch: f64,
) -> Result<LayoutGrid, LayoutError> {
    if !(col_pitch > 0.0 && row_pitch > 0.0) || !col_pitch.is_finite() || !row_pitch.is_finite() {
        return Err(LayoutError::InvalidPitch);
    }
    let placed: Vec<(usize, usize, Vec<char>)> = runs
        .iter()
        .map(|r| {
            let row = ((page_height - r.y) / row_pitch).round().max(0.0) as usize;
            let col = (r.x / col_pitch).round().max(0.0) as usize;
            (row, col, r.text.chars().collect())
        })
        .collect();

    let rows = placed.iter().map(|(row, _, _)| row + 1).max().unwrap_or(0);
    let cols = placed.iter().map(|(_, col, chars)| col + chars.len()).max().unwrap_or(0);
    let mut cells = vec![vec![' '; cols]; rows];
    let mut owner = vec![vec![0usize; cols]; rows];
    let mut collisions = Vec::new();

    for (i, (row, col, chars)) in placed.iter().enumerate() {
        for (k, &ch) in chars.iter().enumerate() {
            if ch == ' ' {
                continue;
            }
            let c = col + k;
            let prev_owner = owner[*row][c];
            let prev = cells[*row][c];
            if prev_owner != 0 && prev_owner != i + 1 && prev != ' ' {
                collisions.push(CellCollision {
                    row: *row,
                    col: c,
                    kept: ch,
                    overwritten: prev,
                    earlier_run: prev_owner - 1,
                    later_run: i,
                });
            }
            cells[*row][c] = ch;
            owner[*row][c] = i + 1;
        }
    }
    Ok(LayoutGrid { cells, row_pitch, col_pitch, collisions })
}

/// One right-trimmed string per grid row. Blank rows stay as empty strings.
pub fn render_lines(grid: &LayoutGrid) -> Vec<String> {
    grid.cells
        .iter()
        .map(|row| {
            let s: String = row.iter().collect();
            s.trim_end_matches(' ').to_string()
        })
        .collect()
}

/// Debug dump format for a page: the rendered lines joined by newlines.
pub fn layout_text(lines: &[String]) -> String {
    lines.join("\n")
}
