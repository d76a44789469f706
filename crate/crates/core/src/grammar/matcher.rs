use std::collections::HashSet;

use log::error;

use super::values::typed_value;
use super::{
    page_text, AnchorPosition, Binding, FailureKind, FieldKind, FormGrammar, ParseFailure, ParseResult, Repeat,
};

/// Lines consumed by one grammar line (several for a repeated line).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementMatch {
    pub element: usize,
    pub lines: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequentialFailure {
    /// Page line where matching got furthest before failing.
    pub line: usize,
    /// Grammar line expected there; `None` for unexpected trailing text.
    pub element: Option<usize>,
}

fn is_blank(line: &str) -> bool {
    line.bytes().all(|b| b == b' ')
}

struct Search<'a> {
    grammar: &'a FormGrammar,
    lines: &'a [String],
    dead: HashSet<(usize, usize)>,
    furthest: Option<SequentialFailure>,
}

impl Search<'_> {
    fn next_non_blank(&self, mut i: usize) -> usize {
        while i < self.lines.len() && is_blank(&self.lines[i]) {
            i += 1;
        }
        i
    }

    fn fail(&mut self, line: usize, element: Option<usize>) {
        if self.furthest.as_ref().is_none_or(|f| line > f.line) {
            self.furthest = Some(SequentialFailure { line, element });
        }
    }

    fn matches(&self, e: usize, i: usize) -> bool {
        i < self.lines.len() && self.grammar.line_patterns[e].regex.is_match(&self.lines[i])
    }

    /// Depth-first over repeat counts, largest first, like a greedy regex.
    fn go(&mut self, e: usize, i: usize) -> Option<Vec<ElementMatch>> {
        if self.dead.contains(&(e, i)) {
            return None;
        }
        let found = self.step(e, i);
        if found.is_none() {
            self.dead.insert((e, i));
        }
        found
    }

    fn step(&mut self, e: usize, i: usize) -> Option<Vec<ElementMatch>> {
        let patterns = &self.grammar.line_patterns;
        if e == patterns.len() {
            let j = self.next_non_blank(i);
            if j == self.lines.len() {
                return Some(Vec::new());
            }
            self.fail(j, None);
            return None;
        }
        let j = self.next_non_blank(i);
        match patterns[e].template.repeat {
            Repeat::One => {
                if self.matches(e, j) {
                    return self.then(e, vec![j], j + 1);
                }
                self.fail(j, Some(e));
                None
            }
            Repeat::Optional => {
                if self.matches(e, j) {
                    if let Some(found) = self.then(e, vec![j], j + 1) {
                        return Some(found);
                    }
                } else {
                    self.fail(j, Some(e));
                }
                self.then(e, Vec::new(), i)
            }
            Repeat::Many => {
                let mut taken = Vec::new();
                let mut k = j;
                while self.matches(e, k) {
                    taken.push(k);
                    k = self.next_non_blank(k + 1);
                }
                for count in (0..=taken.len()).rev() {
                    let resume = if count == 0 { i } else { taken[count - 1] + 1 };
                    if let Some(found) = self.then(e, taken[..count].to_vec(), resume) {
                        return Some(found);
                    }
                }
                None
            }
        }
    }

    fn then(&mut self, e: usize, lines: Vec<usize>, resume: usize) -> Option<Vec<ElementMatch>> {
        let mut rest = self.go(e + 1, resume)?;
        rest.insert(0, ElementMatch { element: e, lines });
        Some(rest)
    }
}

/// Match grammar lines one at a time. Accepts exactly the pages the composed
/// pattern accepts, and on failure says where matching stopped.
pub fn match_sequential(grammar: &FormGrammar, lines: &[String]) -> Result<Vec<ElementMatch>, SequentialFailure> {
    let mut s = Search { grammar, lines, dead: HashSet::new(), furthest: None };
    s.go(0, 0).ok_or_else(|| s.furthest.unwrap_or(SequentialFailure { line: 0, element: Some(0) }))
}

fn char_col(line: &str, byte: usize) -> i64 {
    line[..byte].chars().count() as i64
}

pub(super) fn parse(grammar: &FormGrammar, lines: &[String]) -> Result<ParseResult, ParseFailure> {
    let composed_ok = grammar.composed.is_match(&page_text(lines));
    let line_text = |i: usize| lines.get(i).cloned().unwrap_or_default();
    let no_match = |f: &SequentialFailure| ParseFailure {
        form_id: grammar.form_id.clone(),
        kind: FailureKind::NoMatch,
        first_unmatched_line: (f.line, line_text(f.line)),
        failed_element: f.element,
        matched_prefix_lines: f.line,
    };
    let matched = match (composed_ok, match_sequential(grammar, lines)) {
        (true, Ok(m)) => m,
        (false, Err(f)) => return Err(no_match(&f)),
        (_, seq) => {
            error!("{}: composed and line-by-line matching disagree", grammar.form_id);
            let f = seq.err().unwrap_or(SequentialFailure { line: 0, element: None });
            return Err(no_match(&f));
        }
    };

    let mut diagnostics = Vec::new();
    let mut raw_scalars: Vec<(String, Option<String>, usize)> = Vec::new();
    let mut anchors = Vec::new();
    let mut rows = Vec::new();
    let typed_error = |field: &str, raw: &str, message: String, line: usize| ParseFailure {
        form_id: grammar.form_id.clone(),
        kind: FailureKind::TypedValueError { field: field.to_string(), raw: raw.to_string(), message },
        first_unmatched_line: (line, line_text(line)),
        failed_element: None,
        matched_prefix_lines: line,
    };

    for m in &matched {
        let lp = &grammar.line_patterns[m.element];
        for &li in &m.lines {
            let line = &lines[li];
            let Some(caps) = lp.regex.captures(line) else { continue };
            if lp.template.repeat == Repeat::Many {
                let mut row = Vec::new();
                for f in grammar.row_fields().into_iter().filter(|f| lp.tokens.contains(&f.name)) {
                    let raw = caps.name(&f.name).map(|c| c.as_str().to_string());
                    let value = typed_value(f, raw.as_deref(), &mut diagnostics)
                        .map_err(|msg| typed_error(&f.name, raw.as_deref().unwrap_or(""), msg, li))?;
                    row.push(Binding { name: f.name.clone(), raw: raw.filter(|r| !r.trim().is_empty()), value });
                }
                rows.push(row);
                continue;
            }
            for t in &lp.tokens {
                let cap = caps.name(t);
                if let Some(f) = grammar.field(t).filter(|f| f.kind == FieldKind::CheckboxAnchor) {
                    let (dr, dc) = f.anchor_hint.unwrap_or((0, 0));
                    let col = cap.map_or(0, |c| char_col(line, c.start()));
                    anchors.push(AnchorPosition { name: t.clone(), row: li as i64 + dr as i64, col: col + dc as i64 });
                }
                raw_scalars.push((t.clone(), cap.map(|c| c.as_str().to_string()), li));
            }
        }
    }

    let mut bindings = Vec::new();
    for f in grammar.scalar_fields() {
        let (raw, li) = raw_scalars
            .iter()
            .find(|(n, _, _)| n == &f.name)
            .map_or((None, 0), |(_, r, li)| (r.clone(), *li));
        let value = typed_value(f, raw.as_deref(), &mut diagnostics)
            .map_err(|msg| typed_error(&f.name, raw.as_deref().unwrap_or(""), msg, li))?;
        bindings.push(Binding { name: f.name.clone(), raw: raw.filter(|r| !r.trim().is_empty()), value });
    }
    Ok(ParseResult { form_id: grammar.form_id.clone(), bindings, rows, anchors, diagnostics })
}
