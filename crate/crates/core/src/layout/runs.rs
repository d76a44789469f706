use serde::{Deserialize, Serialize};

use super::{LayoutError, SkipReason};
use crate::geometry::Matrix;
use crate::pdf::{DocumentGraph, Operator, PageRef, PdfValue};

/// Horizontal advance per glyph as a fraction of the font size. Fixed
/// pitch (Courier metrics); proportional widths are not modelled.
pub const GLYPH_ADVANCE: f64 = 0.6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextRun {
    pub text: String,
    /// Device x of the run origin, in points.
    pub x: f64,
    /// Device y of the baseline, in points.
    pub y: f64,
    pub font_size: f64,
}

pub fn extract_text_runs(page: &PageRef, graph: &DocumentGraph) -> Result<Vec<TextRun>, LayoutError> {
    let ops = graph.page_operators(page)?;
    runs_from_operators(&ops)
}

#[derive(Clone, Copy)]
struct TextState {
    font_size: f64,
    char_spacing: f64,
    word_spacing: f64,
    horiz_scale: f64,
    leading: f64,
    rise: f64,
}

impl Default for TextState {
    fn default() -> Self {
        TextState { font_size: 12.0, char_spacing: 0.0, word_spacing: 0.0, horiz_scale: 1.0, leading: 0.0, rise: 0.0 }
    }
}

struct Interp {
    ctm: Matrix,
    stack: Vec<(Matrix, TextState)>,
    ts: TextState,
    tm: Matrix,
    tlm: Matrix,
    runs: Vec<TextRun>,
}

/// Interpret text operators, producing one run per text-showing operator.
pub fn runs_from_operators(ops: &[Operator]) -> Result<Vec<TextRun>, LayoutError> {
    let mut it = Interp {
        ctm: Matrix::IDENTITY,
        stack: Vec::new(),
        ts: TextState::default(),
        tm: Matrix::IDENTITY,
        tlm: Matrix::IDENTITY,
        runs: Vec::new(),
    };
    for op in ops {
        it.step(op)?;
    }
    Ok(it.runs)
}

impl Interp {
    fn step(&mut self, op: &Operator) -> Result<(), LayoutError> {
        match op.name.as_str() {
            "q" => self.stack.push((self.ctm, self.ts)),
            "Q" => {
                if let Some((ctm, ts)) = self.stack.pop() {
                    self.ctm = ctm;
                    self.ts = ts;
                }
            }
            "cm" => {
                if let Some(m) = op.numbers::<6>() {
                    self.ctm = Matrix(m).then(&self.ctm);
                }
            }
            "BT" => {
                self.tm = Matrix::IDENTITY;
                self.tlm = Matrix::IDENTITY;
            }
            "Tf" => {
                if let Some(size) = op.number(1) {
                    self.ts.font_size = size;
                }
            }
            "Tc" => self.set(op, |ts, v| ts.char_spacing = v),
            "Tw" => self.set(op, |ts, v| ts.word_spacing = v),
            "Tz" => self.set(op, |ts, v| ts.horiz_scale = v / 100.0),
            "TL" => self.set(op, |ts, v| ts.leading = v),
            "Ts" => self.set(op, |ts, v| ts.rise = v),
            "Td" => {
                if let Some([tx, ty]) = op.numbers::<2>() {
                    self.move_line(tx, ty);
                }
            }
            "TD" => {
                if let Some([tx, ty]) = op.numbers::<2>() {
                    self.ts.leading = -ty;
                    self.move_line(tx, ty);
                }
            }
            "Tm" => {
                if let Some(m) = op.numbers::<6>() {
                    self.tm = Matrix(m);
                    self.tlm = self.tm;
                }
            }
            "T*" => self.move_line(0.0, -self.ts.leading),
            "Tj" => {
                if let Some(s) = op.operands.last().and_then(PdfValue::as_bytes) {
                    self.show(&[Piece::Text(s)])?;
                }
            }
            "'" => {
                self.move_line(0.0, -self.ts.leading);
                if let Some(s) = op.operands.last().and_then(PdfValue::as_bytes) {
                    self.show(&[Piece::Text(s)])?;
                }
            }
            "\"" => {
                if let (Some(aw), Some(ac)) = (op.number(0), op.number(1)) {
                    self.ts.word_spacing = aw;
                    self.ts.char_spacing = ac;
                }
                self.move_line(0.0, -self.ts.leading);
                if let Some(s) = op.operands.last().and_then(PdfValue::as_bytes) {
                    self.show(&[Piece::Text(s)])?;
                }
            }
            "TJ" => {
                if let Some(items) = op.operands.last().and_then(PdfValue::as_array) {
                    let pieces: Vec<Piece<'_>> = items
                        .iter()
                        .filter_map(|v| match v {
                            PdfValue::String(s) => Some(Piece::Text(s)),
                            PdfValue::Number(n) => Some(Piece::Adjust(*n)),
                            _ => None,
                        })
                        .collect();
                    self.show(&pieces)?;
                }
            }
            _ => {}
        }
        Ok(())
    }

    fn set(&mut self, op: &Operator, f: impl FnOnce(&mut TextState, f64)) {
        if let Some(v) = op.number(0) {
            f(&mut self.ts, v);
        }
    }

    fn move_line(&mut self, tx: f64, ty: f64) {
        self.tlm = Matrix::translate(tx, ty).then(&self.tlm);
        self.tm = self.tlm;
    }

    fn show(&mut self, pieces: &[Piece<'_>]) -> Result<(), LayoutError> {
        let device = self.tm.then(&self.ctm);
        if !device.is_upright() {
            return Err(LayoutError::PageIsImageBased(SkipReason::UnsupportedTextTransform));
        }
        let (x, y) = device.apply(0.0, self.ts.rise);
        let font_size = self.ts.font_size * device.0[3];

        let mut text = String::new();
        let mut advance = 0.0;
        for piece in pieces {
            match piece {
                Piece::Text(bytes) => {
                    for &b in *bytes {
                        text.push(decode_byte(b));
                        let mut w = GLYPH_ADVANCE * self.ts.font_size + self.ts.char_spacing;
                        if b == b' ' {
                            w += self.ts.word_spacing;
                        }
                        advance += w * self.ts.horiz_scale;
                    }
                }
                Piece::Adjust(n) => advance -= n / 1000.0 * self.ts.font_size * self.ts.horiz_scale,
            }
        }
        self.tm = Matrix::translate(advance, 0.0).then(&self.tm);
        if !text.is_empty() && font_size > 0.0 {
            self.runs.push(TextRun { text, x, y, font_size });
        }
        Ok(())
    }
}

enum Piece<'a> {
    Text(&'a [u8]),
    Adjust(f64),
}

/// Single-byte text decoding. Latin-1 covers WinAnsi for everything a
/// form generator emits; C1 controls become spaces.
fn decode_byte(b: u8) -> char {
    match b {
        0x00..=0x1f | 0x7f..=0x9f => ' ',
        _ => b as char,
    }
}
