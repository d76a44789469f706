use log::warn;
use thiserror::Error;

use crate::geometry::Matrix;
use crate::pdf::{Operator, PageRef, PdfValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillRule {
    NonZero,
    EvenOdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Paint {
    Stroke,
    Fill(FillRule),
}

/// Path segment in page points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Line(f64, f64),
    /// Two control points, then the end point.
    Cubic([f64; 6]),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Subpath {
    /// Axis-aligned rectangle with non-negative size, lower-left origin.
    Rect { x: f64, y: f64, w: f64, h: f64 },
    Path { start: (f64, f64), segments: Vec<Segment>, closed: bool },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Element {
    pub path: Vec<Subpath>,
    pub paint: Paint,
    /// 0 is black, 1 is white.
    pub gray: f64,
    /// Points; only meaningful for strokes.
    pub line_width: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphicsScene {
    pub elements: Vec<Element>,
    pub page_width: f64,
    pub page_height: f64,
    pub warnings: Vec<PathStateError>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathStateError {
    #[error("`{0}` painted with no current path")]
    PaintWithoutPath(String),
    #[error("`{0}` with no current point")]
    NoCurrentPoint(String),
}

pub fn build_scene(ops: &[Operator], page: &PageRef) -> GraphicsScene {
    build_scene_sized(ops, page.width(), page.height())
}

#[derive(Clone, Copy)]
struct GState {
    ctm: Matrix,
    fill_gray: f64,
    stroke_gray: f64,
    line_width: f64,
}

struct Builder {
    gs: GState,
    stack: Vec<GState>,
    path: Vec<Subpath>,
    current: Option<(f64, f64)>,
    scene: GraphicsScene,
}

/// Interpret path and graphics-state operators for a page of the given size.
pub fn build_scene_sized(ops: &[Operator], page_width: f64, page_height: f64) -> GraphicsScene {
    let mut b = Builder {
        gs: GState { ctm: Matrix::IDENTITY, fill_gray: 0.0, stroke_gray: 0.0, line_width: 1.0 },
        stack: Vec::new(),
        path: Vec::new(),
        current: None,
        scene: GraphicsScene { page_width, page_height, ..Default::default() },
    };
    for op in ops {
        b.step(op);
    }
    b.scene
}

fn clamp_gray(g: f64) -> f64 {
    if g.is_nan() {
        0.0
    } else {
        g.clamp(0.0, 1.0)
    }
}

fn rgb_gray(r: f64, g: f64, b: f64) -> f64 {
    clamp_gray(0.299 * r + 0.587 * g + 0.114 * b)
}

fn cmyk_gray(c: f64, m: f64, y: f64, k: f64) -> f64 {
    clamp_gray(1.0 - (0.299 * c + 0.587 * m + 0.114 * y + k))
}

/// Gray from a color operand list of 1, 3 or 4 components.
fn color_gray(op: &Operator) -> Option<f64> {
    let nums: Vec<f64> = op.operands.iter().filter_map(PdfValue::as_number).collect();
    match nums.as_slice() {
        [g] => Some(clamp_gray(*g)),
        [r, g, b] => Some(rgb_gray(*r, *g, *b)),
        [c, m, y, k] => Some(cmyk_gray(*c, *m, *y, *k)),
        _ => None,
    }
}

impl Builder {
    fn pt(&self, x: f64, y: f64) -> (f64, f64) {
        self.gs.ctm.apply(x, y)
    }

    fn last_segments(&mut self) -> Option<&mut Vec<Segment>> {
        match self.path.last_mut() {
            Some(Subpath::Path { segments, closed: false, .. }) => Some(segments),
            _ => None,
        }
    }

    fn push_segment(&mut self, op: &str, seg: Segment, end: (f64, f64)) {
        if self.current.is_none() {
            self.scene.warnings.push(PathStateError::NoCurrentPoint(op.to_string()));
            warn!("path operator {op} with no current point");
            return;
        }
        if self.last_segments().is_none() {
            // Drawing after a close or a rectangle continues from the current point.
            let start = self.current.unwrap_or_default();
            self.path.push(Subpath::Path { start, segments: Vec::new(), closed: false });
        }
        if let Some(segs) = self.last_segments() {
            segs.push(seg);
        }
        self.current = Some(end);
    }

    fn step(&mut self, op: &Operator) {
        let name = op.name.as_str();
        match name {
            "q" => self.stack.push(self.gs),
            "Q" => {
                if let Some(gs) = self.stack.pop() {
                    self.gs = gs;
                }
            }
            "cm" => {
                if let Some(m) = op.numbers::<6>() {
                    self.gs.ctm = Matrix(m).then(&self.gs.ctm);
                }
            }
            "w" => {
                if let Some(w) = op.number(0) {
                    self.gs.line_width = w.max(0.0);
                }
            }
            "g" | "rg" | "k" | "sc" | "scn" => {
                if let Some(g) = color_gray(op) {
                    self.gs.fill_gray = g;
                }
            }
            "G" | "RG" | "K" | "SC" | "SCN" => {
                if let Some(g) = color_gray(op) {
                    self.gs.stroke_gray = g;
                }
            }
            "m" => {
                if let Some([x, y]) = op.numbers::<2>() {
                    let p = self.pt(x, y);
                    self.path.push(Subpath::Path { start: p, segments: Vec::new(), closed: false });
                    self.current = Some(p);
                }
            }
            "l" => {
                if let Some([x, y]) = op.numbers::<2>() {
                    let p = self.pt(x, y);
                    self.push_segment(name, Segment::Line(p.0, p.1), p);
                }
            }
            "c" => {
                if let Some([x1, y1, x2, y2, x3, y3]) = op.numbers::<6>() {
                    let (a, b, c) = (self.pt(x1, y1), self.pt(x2, y2), self.pt(x3, y3));
                    self.push_segment(name, Segment::Cubic([a.0, a.1, b.0, b.1, c.0, c.1]), c);
                }
            }
            "v" => {
                if let Some([x2, y2, x3, y3]) = op.numbers::<4>() {
                    let cur = self.current.unwrap_or_default();
                    let (b, c) = (self.pt(x2, y2), self.pt(x3, y3));
                    self.push_segment(name, Segment::Cubic([cur.0, cur.1, b.0, b.1, c.0, c.1]), c);
                }
            }
            "y" => {
                if let Some([x1, y1, x3, y3]) = op.numbers::<4>() {
                    let (a, c) = (self.pt(x1, y1), self.pt(x3, y3));
                    self.push_segment(name, Segment::Cubic([a.0, a.1, c.0, c.1, c.0, c.1]), c);
                }
            }
            "re" => {
                if let Some([x, y, w, h]) = op.numbers::<4>() {
                    self.rect(x, y, w, h);
                }
            }
            "h" => self.close(),
            "S" => self.paint(name, &[Paint::Stroke], false),
            "s" => self.paint(name, &[Paint::Stroke], true),
            "f" | "F" => self.paint(name, &[Paint::Fill(FillRule::NonZero)], false),
            "f*" => self.paint(name, &[Paint::Fill(FillRule::EvenOdd)], false),
            "B" => self.paint(name, &[Paint::Fill(FillRule::NonZero), Paint::Stroke], false),
            "B*" => self.paint(name, &[Paint::Fill(FillRule::EvenOdd), Paint::Stroke], false),
            "b" => self.paint(name, &[Paint::Fill(FillRule::NonZero), Paint::Stroke], true),
            "b*" => self.paint(name, &[Paint::Fill(FillRule::EvenOdd), Paint::Stroke], true),
            "n" => {
                self.path.clear();
                self.current = None;
            }
            _ => {}
        }
    }

    fn rect(&mut self, x: f64, y: f64, w: f64, h: f64) {
        let ctm = self.gs.ctm;
        if ctm.is_axis_aligned() {
            let (x0, y0) = ctm.apply(x, y);
            let (x1, y1) = ctm.apply(x + w, y + h);
            self.path.push(Subpath::Rect { x: x0.min(x1), y: y0.min(y1), w: (x1 - x0).abs(), h: (y1 - y0).abs() });
        } else {
            let start = self.pt(x, y);
            let segments = [(x + w, y), (x + w, y + h), (x, y + h)]
                .iter()
                .map(|&(px, py)| {
                    let p = self.pt(px, py);
                    Segment::Line(p.0, p.1)
                })
                .collect();
            self.path.push(Subpath::Path { start, segments, closed: true });
        }
        self.current = Some(self.pt(x, y));
    }

    fn close(&mut self) {
        if let Some(Subpath::Path { start, closed, .. }) = self.path.last_mut() {
            *closed = true;
            self.current = Some(*start);
        }
    }

    fn paint(&mut self, name: &str, paints: &[Paint], close_first: bool) {
        if close_first {
            self.close();
        }
        let path = std::mem::take(&mut self.path);
        self.current = None;
        if path.is_empty() {
            self.scene.warnings.push(PathStateError::PaintWithoutPath(name.to_string()));
            warn!("paint operator {name} with no current path");
            return;
        }
        for &paint in paints {
            let (gray, line_width) = match paint {
                Paint::Stroke => (self.gs.stroke_gray, self.gs.line_width * self.gs.ctm.mean_scale()),
                Paint::Fill(_) => (self.gs.fill_gray, 0.0),
            };
            self.scene.elements.push(Element { path: path.clone(), paint, gray, line_width });
        }
    }
}
