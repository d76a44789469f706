//! Connected components over the binarized graphics layer and the
//! size / pixel-count rules that turn components into checkbox readings.

use serde::Serialize;

use crate::pdf::{Operator, PageRef};
use crate::raster::{binarize, build_scene, rasterize, strip_text_operators, BinaryImage};

/// Nominal box side and checked threshold at 300 dpi.
pub const NOMINAL_SIDE_300: f64 = 80.0;
pub const CHECKED_PIXELS_300: f64 = 2500.0;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Component {
    pub label: u32,
    /// Inclusive pixel bounds `(min_x, min_y, max_x, max_y)`.
    pub bbox: (usize, usize, usize, usize),
    pub pixel_count: usize,
    pub centroid: (f64, f64),
}

impl Component {
    pub fn bbox_width(&self) -> usize {
        self.bbox.2 - self.bbox.0 + 1
    }

    pub fn bbox_height(&self) -> usize {
        self.bbox.3 - self.bbox.1 + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CheckState {
    Checked,
    Unchecked,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckboxObservation {
    pub label: u32,
    pub bbox: (usize, usize, usize, usize),
    pub pixel_count: usize,
    pub fill_fraction: f64,
    pub state: CheckState,
    /// Bbox centre in page points, lower-left origin.
    pub page_point: (f64, f64),
}

struct DisjointSet {
    parent: Vec<u32>,
}

impl DisjointSet {
    fn make(&mut self) -> u32 {
        self.parent.push(self.parent.len() as u32);
        self.parent.len() as u32 - 1
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let p = self.parent[x as usize];
            self.parent[x as usize] = self.parent[p as usize];
            x = p;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Keep the older run as root so label order follows scan order.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi as usize] = lo;
        }
    }
}

/// 8-connected labeling. Labels are dense from 1 in raster order of each
/// component's first pixel.
pub fn connected_components(img: &BinaryImage) -> Vec<Component> {
    let mut sets = DisjointSet { parent: Vec::new() };
    // (row, start, end, provisional id)
    let mut runs: Vec<(usize, usize, usize, u32)> = Vec::new();
    let mut prev_row: Vec<(usize, usize, u32)> = Vec::new();
    for y in 0..img.height {
        let mut cur_row = Vec::new();
        let mut p = 0;
        for (s, e) in img.runs(y) {
            let id = sets.make();
            // Previous-row runs touching [s-1, e] are 8-adjacent.
            while p < prev_row.len() && prev_row[p].1 < s {
                p += 1;
            }
            let mut q = p;
            while q < prev_row.len() && prev_row[q].0 <= e {
                sets.union(id, prev_row[q].2);
                q += 1;
            }
            if q > p {
                // The last overlapping run may also touch the next run on this row.
                p = q - 1;
            }
            cur_row.push((s, e, id));
            runs.push((y, s, e, id));
        }
        prev_row = cur_row;
    }

    let mut label_of_root = vec![0u32; sets.parent.len()];
    let mut comps: Vec<(Component, f64, f64)> = Vec::new();
    for &(y, s, e, id) in &runs {
        let root = sets.find(id) as usize;
        if label_of_root[root] == 0 {
            comps.push((
                Component { label: comps.len() as u32 + 1, bbox: (s, y, e - 1, y), pixel_count: 0, centroid: (0.0, 0.0) },
                0.0,
                0.0,
            ));
            label_of_root[root] = comps.len() as u32;
        }
        let (c, sx, sy) = &mut comps[label_of_root[root] as usize - 1];
        let n = e - s;
        c.pixel_count += n;
        c.bbox.0 = c.bbox.0.min(s);
        c.bbox.2 = c.bbox.2.max(e - 1);
        c.bbox.3 = c.bbox.3.max(y);
        *sx += (s + e - 1) as f64 * n as f64 / 2.0;
        *sy += (y * n) as f64;
    }
    comps
        .into_iter()
        .map(|(mut c, sx, sy)| {
            c.centroid = (sx / c.pixel_count as f64, sy / c.pixel_count as f64);
            c
        })
        .collect()
}

/// Half the median bbox height, the default row grouping tolerance.
pub fn default_row_tolerance(components: &[Component]) -> f64 {
    if components.is_empty() {
        return 0.0;
    }
    let mut h: Vec<usize> = components.iter().map(Component::bbox_height).collect();
    h.sort_unstable();
    let mid = h.len() / 2;
    let median = if h.len() % 2 == 1 { h[mid] as f64 } else { (h[mid - 1] + h[mid]) as f64 / 2.0 };
    median / 2.0
}

/// Rows top-down by centroid y (a row collects components within
/// `row_tolerance` of its first member), then left-to-right, ties by label.
pub fn order_reading(mut components: Vec<Component>, row_tolerance: f64) -> Vec<Component> {
    components.sort_by(|a, b| a.centroid.1.total_cmp(&b.centroid.1).then(a.label.cmp(&b.label)));
    let mut rows: Vec<Vec<Component>> = Vec::new();
    let mut row_y = f64::NEG_INFINITY;
    for c in components {
        match rows.last_mut() {
            Some(row) if c.centroid.1 - row_y <= row_tolerance => row.push(c),
            _ => {
                row_y = c.centroid.1;
                rows.push(vec![c]);
            }
        }
    }
    rows.into_iter()
        .flat_map(|mut row| {
            row.sort_by(|a, b| a.centroid.0.total_cmp(&b.centroid.0).then(a.label.cmp(&b.label)));
            row
        })
        .collect()
}

pub fn nominal_side(dpi: u32) -> f64 {
    NOMINAL_SIDE_300 * dpi as f64 / 300.0
}

pub fn checked_threshold(dpi: u32) -> f64 {
    let r = dpi as f64 / 300.0;
    CHECKED_PIXELS_300 * r * r
}

/// Apply the size and aspect gates; `None` means not a checkbox.
pub fn classify_checkbox(c: &Component, dpi: u32, page_height: f64) -> Option<CheckboxObservation> {
    let (w, h) = (c.bbox_width() as f64, c.bbox_height() as f64);
    let side = nominal_side(dpi);
    let in_gate = |s: f64| s >= 0.6 * side && s <= 1.4 * side;
    let aspect = w / h;
    if !in_gate(w) || !in_gate(h) || !(0.75..=1.33).contains(&aspect) {
        return None;
    }
    let state = if c.pixel_count as f64 >= checked_threshold(dpi) { CheckState::Checked } else { CheckState::Unchecked };
    let to_pt = 72.0 / dpi as f64;
    let cx = (c.bbox.0 + c.bbox.2 + 1) as f64 / 2.0;
    let cy = (c.bbox.1 + c.bbox.3 + 1) as f64 / 2.0;
    Some(CheckboxObservation {
        label: c.label,
        bbox: c.bbox,
        pixel_count: c.pixel_count,
        fill_fraction: c.pixel_count as f64 / (w * h),
        state,
        page_point: (cx * to_pt, page_height - cy * to_pt),
    })
}

/// Everything found on one page's graphics layer.
#[derive(Debug, Clone, Default)]
pub struct PageCheckboxes {
    pub components: Vec<Component>,
    /// Checkbox readings in reading order.
    pub observations: Vec<CheckboxObservation>,
}

/// Full page path: drop text, rasterize, binarize, label, gate, order.
pub fn detect_checkboxes(ops: &[Operator], page: &PageRef, dpi: u32, ink_threshold: u8) -> PageCheckboxes {
    let scene = build_scene(&strip_text_operators(ops), page);
    if scene.elements.is_empty() {
        return PageCheckboxes::default();
    }
    let img = binarize(&rasterize(&scene, dpi), ink_threshold);
    let components = connected_components(&img);
    let boxes: Vec<Component> =
        components.iter().filter(|c| classify_checkbox(c, dpi, page.height()).is_some()).cloned().collect();
    let tol = default_row_tolerance(&boxes);
    let observations = order_reading(boxes, tol)
        .iter()
        .filter_map(|c| classify_checkbox(c, dpi, page.height()))
        .collect();
    PageCheckboxes { components, observations }
}

/// Debug dump: one CSV row per component with its verdict.
pub fn components_csv(components: &[Component], dpi: u32, page_height: f64) -> String {
    let mut out = String::from("label,min_x,min_y,max_x,max_y,pixel_count,verdict\n");
    for c in components {
        let verdict = match classify_checkbox(c, dpi, page_height) {
            Some(o) if o.state == CheckState::Checked => "checked",
            Some(_) => "unchecked",
            None => "not_a_checkbox",
        };
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.label, c.bbox.0, c.bbox.1, c.bbox.2, c.bbox.3, c.pixel_count, verdict
        ));
    }
    out
}
