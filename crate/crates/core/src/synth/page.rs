//! Page model for generated forms and its rendering to PDF content.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::layout::{DEFAULT_COL_PITCH, DEFAULT_ROW_PITCH};
use crate::pdf::format_number;
use crate::pdf::writer::PdfWriter;

pub const PAGE_WIDTH: f64 = 612.0;
pub const PAGE_HEIGHT: f64 = 792.0;
/// Courier at this size advances exactly one grid column per glyph.
pub const FONT_SIZE: f64 = 10.0;
/// Checkbox side in points: 80 px at 300 dpi.
pub const BOX_SIDE: f64 = 19.2;
pub const BOX_LINE_WIDTH: f64 = 1.0;
/// Diagonal stroke width of a crossed box.
pub const CROSS_LINE_WIDTH: f64 = 2.4;
pub const RULE_GRAY: f64 = 0.5;
/// First text row of a page.
pub const TOP_ROW: usize = 3;
/// Last usable row of a page.
pub const BOTTOM_ROW: usize = 63;
/// Box centres sit this far above the baseline of their label row.
pub const BOX_RAISE: f64 = 3.5;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckboxGlyph {
    Empty,
    Filled,
    Crossed,
}

impl CheckboxGlyph {
    pub fn is_checked(self) -> bool {
        self != CheckboxGlyph::Empty
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ItemKind {
    /// Printed form text; never moves.
    Label(String),
    /// Filled-in value; subject to column shifts.
    Value(String),
    /// Box centred on this column.
    Checkbox(CheckboxGlyph),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Item {
    pub col: usize,
    pub kind: ItemKind,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Line {
    pub items: Vec<Item>,
    /// Draw a gray rule under this line.
    pub rule_below: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Page {
    pub lines: Vec<Line>,
}

/// Layout variations applied at render time.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RenderOptions {
    /// "Dosage:" printed as "Dose:".
    pub alt_labels: bool,
    /// The values of each line moved together two columns left or right.
    pub shifted_columns: bool,
    /// Blank lines inserted between form lines.
    pub extra_blank_lines: bool,
    /// Extra gray rules, including rules through checkbox rows.
    pub gray_rules: bool,
}

impl RenderOptions {
    pub fn any(&self) -> bool {
        self.alt_labels || self.shifted_columns || self.extra_blank_lines || self.gray_rules
    }
}

/// Helper for laying out a page line by line.
#[derive(Default)]
pub struct PageBuilder {
    page: Page,
}

/// Left margin column.
pub const MARGIN: usize = 4;
/// Spaces between a label and its value, and after the value's field.
const VALUE_GAP: usize = 3;
const FIELD_GAP: usize = 6;

impl PageBuilder {
    pub fn new() -> Self {
        PageBuilder::default()
    }

    pub fn finish(self) -> Page {
        self.page
    }

    fn push(&mut self, items: Vec<Item>) -> &mut Line {
        self.page.lines.push(Line { items, rule_below: false });
        self.page.lines.last_mut().expect("just pushed")
    }

    pub fn title(&mut self, text: &str) {
        self.push(vec![Item { col: MARGIN, kind: ItemKind::Label(text.into()) }]);
    }

    pub fn ruled_title(&mut self, text: &str) {
        self.push(vec![Item { col: MARGIN, kind: ItemKind::Label(text.into()) }]).rule_below = true;
    }

    pub fn blank(&mut self) {
        self.push(Vec::new());
    }

    /// `label: value` pairs on one line. `width` reserves room for the value
    /// so later labels stay put whatever the value length.
    pub fn fields(&mut self, fields: &[(&str, Option<String>, usize)]) {
        let mut items = Vec::new();
        let mut col = MARGIN;
        for (label, value, width) in fields {
            items.push(Item { col, kind: ItemKind::Label(label.to_string()) });
            let vcol = col + label.len() + VALUE_GAP;
            if let Some(v) = value.as_ref().filter(|v| !v.is_empty()) {
                items.push(Item { col: vcol, kind: ItemKind::Value(v.clone()) });
            }
            col = vcol + (*width).max(value.as_ref().map_or(0, String::len)) + FIELD_GAP;
        }
        self.push(items);
    }

    /// Labels each followed by a box whose centre sits three columns after
    /// the label ends.
    pub fn checkboxes(&mut self, boxes: &[(&str, Option<CheckboxGlyph>)]) {
        let mut items = Vec::new();
        let mut col = MARGIN;
        for (label, glyph) in boxes {
            items.push(Item { col, kind: ItemKind::Label(label.to_string()) });
            let centre = col + label.len() + 3;
            if let Some(g) = glyph {
                items.push(Item { col: centre, kind: ItemKind::Checkbox(*g) });
            }
            col = centre + 6;
        }
        self.push(items);
    }

    /// Column headings with a rule below.
    pub fn header(&mut self, cols: &[(&str, usize)]) {
        let items = cols.iter().map(|(t, c)| Item { col: *c, kind: ItemKind::Label(t.to_string()) }).collect();
        self.push(items).rule_below = true;
    }

    /// Table cells; empty cells are left blank.
    pub fn row(&mut self, cells: &[(String, usize)]) {
        let items = cells
            .iter()
            .filter(|(t, _)| !t.is_empty())
            .map(|(t, c)| Item { col: *c, kind: ItemKind::Value(t.clone()) })
            .collect();
        self.push(items);
    }

    pub fn text(&mut self, col: usize, text: &str) {
        self.push(vec![Item { col, kind: ItemKind::Value(text.into()) }]);
    }
}

/// Layout text the page should read back as when rendered without
/// perturbations: one string per grid row, right-trimmed.
pub fn expected_lines(page: &Page) -> Vec<String> {
    let mut lines = vec![String::new(); TOP_ROW];
    for line in &page.lines {
        let mut cells: Vec<char> = Vec::new();
        for item in &line.items {
            if let ItemKind::Label(t) | ItemKind::Value(t) = &item.kind {
                for (i, c) in t.chars().enumerate() {
                    let at = item.col + i;
                    if cells.len() <= at {
                        cells.resize(at + 1, ' ');
                    }
                    cells[at] = c;
                }
            }
        }
        lines.push(cells.into_iter().collect::<String>().trim_end().to_string());
    }
    lines
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        if matches!(c, '(' | ')' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

fn n(v: f64) -> String {
    format_number((v * 1000.0).round() / 1000.0)
}

/// Content stream for `page`. Layout randomness (shifts, blank lines) is
/// drawn from `rng` only when the matching option is on.
pub fn render_page(page: &Page, opts: &RenderOptions, rng: &mut ChaCha8Rng) -> Vec<u8> {
    let mut rows = Vec::with_capacity(page.lines.len());
    let mut row = TOP_ROW;
    let spare = BOTTOM_ROW.saturating_sub(TOP_ROW + page.lines.len());
    let mut extra_left = if opts.extra_blank_lines { spare.min(3) } else { 0 };
    for i in 0..page.lines.len() {
        if i > 0 && extra_left > 0 && rng.gen_bool(0.25) {
            row += 1;
            extra_left -= 1;
        }
        rows.push(row);
        row += 1;
    }

    let mut text = String::from("BT\n/F1 ");
    text.push_str(&n(FONT_SIZE));
    text.push_str(" Tf\n");
    let mut graphics = String::new();
    let baseline = |r: usize| PAGE_HEIGHT - r as f64 * DEFAULT_ROW_PITCH;

    // Rules first so boxes paint over them.
    graphics.push_str(&format!("q {} G 0.5 w\n", n(RULE_GRAY)));
    for (line, &r) in page.lines.iter().zip(&rows) {
        let y = baseline(r) - 3.0;
        if line.rule_below {
            graphics.push_str(&format!("{} {} m {} {} l S\n", n(18.0), n(y), n(PAGE_WIDTH - 18.0), n(y)));
        }
        if opts.gray_rules && line.items.iter().any(|it| matches!(it.kind, ItemKind::Checkbox(_))) {
            let yc = baseline(r) + BOX_RAISE;
            graphics.push_str(&format!("{} {} m {} {} l S\n", n(18.0), n(yc), n(PAGE_WIDTH - 18.0), n(yc)));
        }
    }
    if opts.gray_rules {
        graphics.push_str(&format!("{} {} {} {} re S\n", n(12.0), n(12.0), n(PAGE_WIDTH - 24.0), n(PAGE_HEIGHT - 24.0)));
    }
    graphics.push_str("Q\n");

    for (line, &r) in page.lines.iter().zip(&rows) {
        let y = baseline(r);
        let has_values = line.items.iter().any(|it| matches!(it.kind, ItemKind::Value(_)));
        let shift = if opts.shifted_columns && has_values { if rng.gen_bool(0.5) { 2 } else { -2 } } else { 0 };
        for item in &line.items {
            match &item.kind {
                ItemKind::Label(t) | ItemKind::Value(t) => {
                    let mut label = t.as_str();
                    if opts.alt_labels && label == "Dosage:" {
                        label = "Dose:";
                    }
                    let mut col = item.col as i64;
                    if matches!(item.kind, ItemKind::Value(_)) {
                        col += shift;
                    }
                    let x = col.max(0) as f64 * DEFAULT_COL_PITCH;
                    text.push_str(&format!("1 0 0 1 {} {} Tm ({}) Tj\n", n(x), n(y), escape(label)));
                }
                ItemKind::Checkbox(glyph) => {
                    let cx = item.col as f64 * DEFAULT_COL_PITCH;
                    graphics.push_str(&checkbox_ops(cx, y + BOX_RAISE, *glyph));
                }
            }
        }
    }
    text.push_str("ET\n");
    let mut out = graphics;
    out.push_str(&text);
    out.into_bytes()
}

/// Drawing operators for one box centred on `(cx, cy)`.
pub fn checkbox_ops(cx: f64, cy: f64, glyph: CheckboxGlyph) -> String {
    let h = BOX_SIDE / 2.0;
    let (x0, y0) = (cx - h, cy - h);
    let mut s = format!("q 0 G 0 g {} w {} {} {} {} re S\n", n(BOX_LINE_WIDTH), n(x0), n(y0), n(BOX_SIDE), n(BOX_SIDE));
    match glyph {
        CheckboxGlyph::Empty => {}
        CheckboxGlyph::Filled => {
            let inset = 0.25;
            s.push_str(&format!("{} {} {} {} re f\n", n(x0 + inset), n(y0 + inset), n(BOX_SIDE - 2.0 * inset), n(BOX_SIDE - 2.0 * inset)));
        }
        CheckboxGlyph::Crossed => {
            let i = 0.75;
            let (x1, y1) = (x0 + BOX_SIDE, y0 + BOX_SIDE);
            s.push_str(&format!(
                "{} w {} {} m {} {} l S {} {} m {} {} l S\n",
                n(CROSS_LINE_WIDTH),
                n(x0 + i),
                n(y0 + i),
                n(x1 - i),
                n(y1 - i),
                n(x0 + i),
                n(y1 - i),
                n(x1 - i),
                n(y0 + i)
            ));
        }
    }
    s.push_str("Q\n");
    s
}

/// A whole document from rendered pages.
pub fn write_pdf(pages: &[Vec<u8>], info: crate::pdf::Dict) -> Vec<u8> {
    let mut w = PdfWriter::new();
    if !info.is_empty() {
        w.set_info(info);
    }
    for content in pages {
        w.add_page(PAGE_WIDTH, PAGE_HEIGHT, content, true);
    }
    w.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checkbox::{connected_components, CHECKED_PIXELS_300};
    use crate::pdf::tokenize_content;
    use crate::raster::{binarize, build_scene_sized, rasterize, DEFAULT_INK_THRESHOLD};
    use rand::SeedableRng;

    fn ink(glyph: CheckboxGlyph, dpi: u32) -> Vec<usize> {
        let ops = tokenize_content(checkbox_ops(50.0, 50.0, glyph).as_bytes()).unwrap();
        let scene = build_scene_sized(&ops, 100.0, 100.0);
        let img = binarize(&rasterize(&scene, dpi), DEFAULT_INK_THRESHOLD);
        connected_components(&img).iter().map(|c| c.pixel_count).collect()
    }

    #[test]
    fn glyphs_clear_the_threshold_with_margin() {
        let unchecked = ink(CheckboxGlyph::Empty, 300);
        assert_eq!(unchecked.len(), 1);
        assert!(unchecked[0] as f64 <= 0.8 * CHECKED_PIXELS_300, "{unchecked:?}");
        for g in [CheckboxGlyph::Filled, CheckboxGlyph::Crossed] {
            let c = ink(g, 300);
            assert_eq!(c.len(), 1, "{g:?} must be one component");
            assert!(c[0] as f64 >= 1.2 * CHECKED_PIXELS_300, "{g:?}: {c:?}");
        }
    }

    #[test]
    fn page_renders_every_item() {
        let mut b = PageBuilder::new();
        b.title("LIVER DATA");
        b.fields(&[("Donor ID:", Some("ABCD123".into()), 7), ("Date:", None, 10)]);
        b.checkboxes(&[("Biopsy:", Some(CheckboxGlyph::Crossed)), ("Fibrosis:", Some(CheckboxGlyph::Empty))]);
        let page = b.finish();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let content = String::from_utf8(render_page(&page, &RenderOptions::default(), &mut rng)).unwrap();
        assert!(content.contains("(LIVER DATA) Tj"));
        assert!(content.contains("1 0 0 1 24 756 Tm (LIVER DATA)"));
        assert!(content.contains("1 0 0 1 96 744 Tm (ABCD123)"));
        assert_eq!(content.matches(" re S").count(), 2);
        assert!(tokenize_content(content.as_bytes()).is_ok());
    }

    #[test]
    fn alt_labels_and_escaping() {
        let mut b = PageBuilder::new();
        b.fields(&[("Dosage:", Some("a(b)".into()), 4)]);
        let opts = RenderOptions { alt_labels: true, ..Default::default() };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let content = String::from_utf8(render_page(&b.finish(), &opts, &mut rng)).unwrap();
        assert!(content.contains("(Dose:)"));
        assert!(content.contains("(a\\(b\\))"));
    }
}
