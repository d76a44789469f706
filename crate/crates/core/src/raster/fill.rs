//! Hard-edged rendering. A pixel is inked when its centre is inside the
//! shape, except axis-aligned rectangles, which are snapped to whole pixels
//! so their area is exactly `round(w) * round(h)`.

use super::image::RasterBitmap;
use super::scene::{Element, FillRule, GraphicsScene, Paint, Segment, Subpath};

const FLATTEN_TOLERANCE_PX: f64 = 0.2;

type Pt = (f64, f64);

struct Canvas {
    bm: RasterBitmap,
    scale: f64,
    page_height: f64,
}

pub(super) fn render(scene: &GraphicsScene, dpi: u32) -> RasterBitmap {
    let scale = dpi as f64 / 72.0;
    let width = (scene.page_width * scale - 1e-9).ceil().max(0.0) as usize;
    let height = (scene.page_height * scale - 1e-9).ceil().max(0.0) as usize;
    let mut canvas = Canvas { bm: RasterBitmap::blank(width, height, dpi), scale, page_height: scene.page_height };
    for el in &scene.elements {
        canvas.draw(el);
    }
    canvas.bm
}

impl Canvas {
    /// Page point to pixel space, y down.
    fn px(&self, p: Pt) -> Pt {
        (p.0 * self.scale, (self.page_height - p.1) * self.scale)
    }

    fn span(&mut self, y: i64, x0: i64, x1: i64, value: u8) {
        if y < 0 || y as usize >= self.bm.height {
            return;
        }
        let x0 = x0.max(0) as usize;
        let x1 = (x1.max(0) as usize).min(self.bm.width);
        if x0 >= x1 {
            return;
        }
        let row = &mut self.bm.luminance[y as usize * self.bm.width..][x0..x1];
        for l in row {
            if *l > value {
                *l = value;
            }
        }
    }

    /// Snapped pixel rectangle `[x0, x0+w) x [y0, y0+h)` from pixel-space
    /// origin and size.
    fn snap(x: f64, y: f64, w: f64, h: f64) -> (i64, i64, i64, i64) {
        let px0 = x.round() as i64;
        let py0 = y.round() as i64;
        (px0, py0, px0 + w.round() as i64, py0 + h.round() as i64)
    }

    /// Rectangle in page points (lower-left origin) to pixel space (top-left origin).
    fn rect_px(&self, x: f64, y: f64, w: f64, h: f64) -> (f64, f64, f64, f64) {
        (x * self.scale, (self.page_height - y - h) * self.scale, w * self.scale, h * self.scale)
    }

    fn fill_snapped(&mut self, r: (i64, i64, i64, i64), value: u8) {
        for y in r.1..r.3 {
            self.span(y, r.0, r.2, value);
        }
    }

    fn draw(&mut self, el: &Element) {
        let value = (255.0 * el.gray).round().clamp(0.0, 255.0) as u8;
        if value == 255 {
            return;
        }
        match el.paint {
            Paint::Fill(rule) => self.fill(el, rule, value),
            Paint::Stroke => self.stroke(el, value),
        }
    }

    fn fill(&mut self, el: &Element, rule: FillRule, value: u8) {
        let rects: Option<Vec<_>> = el
            .path
            .iter()
            .map(|sp| match *sp {
                Subpath::Rect { x, y, w, h } => {
                    let (px, py, pw, ph) = self.rect_px(x, y, w, h);
                    Some(Self::snap(px, py, pw, ph))
                }
                Subpath::Path { .. } => None,
            })
            .collect();
        match rects {
            Some(rects) if rule == FillRule::NonZero || rects.len() == 1 => {
                for r in rects {
                    self.fill_snapped(r, value);
                }
            }
            Some(rects) => self.fill_rects_even_odd(&rects, value),
            None => {
                let polys: Vec<Vec<Pt>> = el.path.iter().map(|sp| self.flatten(sp)).collect();
                self.fill_polygons(&polys, rule, value);
            }
        }
    }

    fn fill_rects_even_odd(&mut self, rects: &[(i64, i64, i64, i64)], value: u8) {
        let y0 = rects.iter().map(|r| r.1).min().unwrap_or(0);
        let y1 = rects.iter().map(|r| r.3).max().unwrap_or(0);
        for y in y0..y1 {
            let mut xs: Vec<i64> = Vec::new();
            for r in rects.iter().filter(|r| r.1 <= y && y < r.3) {
                xs.push(r.0);
                xs.push(r.2);
            }
            xs.sort_unstable();
            // Parity flips at every edge; pairs of sorted edges bound the odd spans.
            for pair in xs.chunks_exact(2) {
                self.span(y, pair[0], pair[1], value);
            }
        }
    }

    fn stroke(&mut self, el: &Element, value: u8) {
        let width_px = (el.line_width * self.scale).max(1.0);
        let half = width_px / 2.0;
        for sp in &el.path {
            if let Subpath::Rect { x, y, w, h } = *sp {
                let (px, py, pw, ph) = self.rect_px(x, y, w, h);
                let outer = Self::snap(px - half, py - half, pw + width_px, ph + width_px);
                if pw - width_px <= 0.0 || ph - width_px <= 0.0 {
                    self.fill_snapped(outer, value);
                    continue;
                }
                let inner = Self::snap(px + half, py + half, pw - width_px, ph - width_px);
                self.fill_rects_even_odd(&[outer, inner], value);
                continue;
            }
            let pts = self.flatten(sp);
            for seg in pts.windows(2) {
                if let Some(quad) = segment_quad(seg[0], seg[1], half) {
                    self.fill_polygons(&[quad.to_vec()], FillRule::NonZero, value);
                }
            }
            if pts.len() == 1 {
                // Degenerate subpath: a single dot of the stroke width.
                let (x, y) = pts[0];
                let r = Self::snap(x - half, y - half, width_px, width_px);
                self.fill_snapped(r, value);
            }
        }
    }

    /// Subpath as a pixel-space polyline; closed subpaths repeat the start.
    fn flatten(&self, sp: &Subpath) -> Vec<Pt> {
        match sp {
            Subpath::Rect { x, y, w, h } => {
                let c = [(*x, *y), (x + w, *y), (x + w, y + h), (*x, y + h), (*x, *y)];
                c.iter().map(|&p| self.px(p)).collect()
            }
            Subpath::Path { start, segments, closed } => {
                let mut pts = vec![self.px(*start)];
                for seg in segments {
                    match *seg {
                        Segment::Line(x, y) => pts.push(self.px((x, y))),
                        Segment::Cubic([x1, y1, x2, y2, x3, y3]) => {
                            let p0 = *pts.last().unwrap_or(&(0.0, 0.0));
                            flatten_cubic(p0, self.px((x1, y1)), self.px((x2, y2)), self.px((x3, y3)), &mut pts);
                        }
                    }
                }
                if *closed && pts.len() > 1 && pts.first() != pts.last() {
                    pts.push(pts[0]);
                }
                pts
            }
        }
    }

    /// Scanline fill sampling pixel centres. Polygons are implicitly closed.
    fn fill_polygons(&mut self, polys: &[Vec<Pt>], rule: FillRule, value: u8) {
        let mut edges: Vec<(Pt, Pt)> = Vec::new();
        for poly in polys {
            if poly.len() < 2 {
                continue;
            }
            for i in 0..poly.len() {
                let a = poly[i];
                let b = poly[(i + 1) % poly.len()];
                if a.1 != b.1 {
                    edges.push((a, b));
                }
            }
        }
        if edges.is_empty() {
            return;
        }
        let min_y = edges.iter().map(|(a, b)| a.1.min(b.1)).fold(f64::INFINITY, f64::min);
        let max_y = edges.iter().map(|(a, b)| a.1.max(b.1)).fold(f64::NEG_INFINITY, f64::max);
        let row0 = ((min_y - 0.5).ceil() as i64).max(0);
        let row1 = ((max_y - 0.5).ceil() as i64).min(self.bm.height as i64);
        let mut crossings: Vec<(f64, i32)> = Vec::new();
        for row in row0..row1 {
            let yc = row as f64 + 0.5;
            crossings.clear();
            for &(a, b) in &edges {
                let (lo, hi, dir) = if a.1 < b.1 { (a, b, 1) } else { (b, a, -1) };
                if lo.1 <= yc && yc < hi.1 {
                    let t = (yc - lo.1) / (hi.1 - lo.1);
                    crossings.push((lo.0 + t * (hi.0 - lo.0), dir));
                }
            }
            crossings.sort_by(|p, q| p.0.total_cmp(&q.0));
            let mut winding = 0;
            for i in 0..crossings.len() {
                winding += crossings[i].1;
                let inside = match rule {
                    FillRule::NonZero => winding != 0,
                    FillRule::EvenOdd => (i + 1) % 2 == 1,
                };
                if inside && i + 1 < crossings.len() {
                    let xa = (crossings[i].0 - 0.5).ceil() as i64;
                    let xb = (crossings[i + 1].0 - 0.5).ceil() as i64;
                    self.span(row, xa, xb, value);
                }
            }
        }
    }
}

fn flatten_cubic(p0: Pt, p1: Pt, p2: Pt, p3: Pt, out: &mut Vec<Pt>) {
    let dd = |a: Pt, b: Pt, c: Pt| ((a.0 - 2.0 * b.0 + c.0).powi(2) + (a.1 - 2.0 * b.1 + c.1).powi(2)).sqrt();
    let l = dd(p0, p1, p2).max(dd(p1, p2, p3));
    let n = ((0.75 * l / FLATTEN_TOLERANCE_PX).sqrt().ceil() as usize).clamp(1, 1000);
    for i in 1..=n {
        let t = i as f64 / n as f64;
        let u = 1.0 - t;
        let (a, b, c, d) = (u * u * u, 3.0 * u * u * t, 3.0 * u * t * t, t * t * t);
        out.push((
            a * p0.0 + b * p1.0 + c * p2.0 + d * p3.0,
            a * p0.1 + b * p1.1 + c * p2.1 + d * p3.1,
        ));
    }
}

/// Rectangle of half-width `half` around segment `a`-`b`, butt caps.
fn segment_quad(a: Pt, b: Pt, half: f64) -> Option<[Pt; 4]> {
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = (dx * dx + dy * dy).sqrt();
    if len < 1e-9 {
        return None;
    }
    let (nx, ny) = (-dy / len * half, dx / len * half);
    Some([(a.0 + nx, a.1 + ny), (b.0 + nx, b.1 + ny), (b.0 - nx, b.1 - ny), (a.0 - nx, a.1 - ny)])
}
