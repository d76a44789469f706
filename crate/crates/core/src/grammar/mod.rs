//! Form grammars: per-line named-capture patterns composed into one
//! whole-page regular expression, plus the machinery to identify a page's
//! form, bind its fields to typed values and report where parsing stops.
//!
//! Grammars are plain-text `.grammar` files; see `docs/grammar-format.md`.

mod evaluate;
mod file;
mod matcher;
mod registry;
mod template;
mod values;

use regex::Regex;
use serde::Serialize;
use thiserror::Error;

pub use evaluate::{evaluate_grammar, EvaluationReport, FailureCluster};
pub use file::parse_grammar_file;
pub use matcher::{match_sequential, ElementMatch, SequentialFailure};
pub use registry::{identify_form, Registry, BUILTIN_GRAMMARS, TITLE_SCAN_LINES};
pub use values::{canonicalize, parse_date, parse_number, parse_time, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FieldKind {
    Categorical,
    Date,
    Time,
    Number,
    PersonName,
    FreeText,
    CheckboxAnchor,
}

impl std::str::FromStr for FieldKind {
    type Err = GrammarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "Categorical" => FieldKind::Categorical,
            "Date" => FieldKind::Date,
            "Time" => FieldKind::Time,
            "Number" => FieldKind::Number,
            "PersonName" => FieldKind::PersonName,
            "FreeText" => FieldKind::FreeText,
            "CheckboxAnchor" => FieldKind::CheckboxAnchor,
            other => return Err(GrammarError::Syntax { line: 0, message: format!("unknown field kind `{other}`") }),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldSpec {
    pub name: String,
    pub kind: FieldKind,
    /// Regex fragment for the value. Empty for checkbox anchors.
    pub pattern: String,
    /// Offset in grid cells from the anchor's matched position to the box centre.
    pub anchor_hint: Option<(i32, i32)>,
    /// Categorical canonical labels with their accepted spellings.
    pub canon: Vec<(String, Vec<String>)>,
}

impl FieldSpec {
    pub fn new(name: &str, kind: FieldKind, pattern: &str) -> Self {
        FieldSpec { name: name.to_string(), kind, pattern: pattern.to_string(), anchor_hint: None, canon: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Repeat {
    One,
    Optional,
    Many,
}

/// One line of a form as written in the grammar file.
#[derive(Debug, Clone, PartialEq)]
pub struct LineTemplate {
    pub text: String,
    pub repeat: Repeat,
    /// Spaces match literally instead of as elastic gaps.
    pub exact: bool,
}

impl LineTemplate {
    pub fn one(text: &str) -> Self {
        LineTemplate { text: text.to_string(), repeat: Repeat::One, exact: false }
    }
}

/// A compiled line: its regex source (without anchors) and a line-anchored regex.
#[derive(Debug, Clone)]
pub struct LinePattern {
    pub template: LineTemplate,
    pub source: String,
    pub tokens: Vec<String>,
    pub regex: Regex,
}

#[derive(Debug, Clone)]
pub struct FormGrammar {
    pub form_id: String,
    /// Parent form for subforms and page sections.
    pub part_of: Option<String>,
    /// Output table name, `None` for container forms without their own table.
    pub table: Option<String>,
    pub priority: i32,
    pub title_pattern: String,
    pub title_regex: Regex,
    pub line_patterns: Vec<LinePattern>,
    pub fields: Vec<FieldSpec>,
    pub composed_source: String,
    pub composed: Regex,
}

impl FormGrammar {
    pub fn field(&self, name: &str) -> Option<&FieldSpec> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// Fields bound once per page, in declaration order.
    pub fn scalar_fields(&self) -> Vec<&FieldSpec> {
        self.fields.iter().filter(|f| !self.is_repeated_field(&f.name)).collect()
    }

    /// Fields bound once per repeated line, in declaration order.
    pub fn row_fields(&self) -> Vec<&FieldSpec> {
        self.fields.iter().filter(|f| self.is_repeated_field(&f.name)).collect()
    }

    fn is_repeated_field(&self, name: &str) -> bool {
        self.line_patterns.iter().any(|l| l.template.repeat == Repeat::Many && l.tokens.iter().any(|t| t == name))
    }

    pub fn anchor_fields(&self) -> Vec<&FieldSpec> {
        self.fields.iter().filter(|f| f.kind == FieldKind::CheckboxAnchor).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GrammarError {
    #[error("token `{0}` is defined more than once")]
    DuplicateTokenName(String),
    #[error("pattern does not compile: {message} (in `{fragment}`)")]
    PatternCompileError { fragment: String, message: String },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("grammar registry is empty")]
    EmptyRegistry,
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("reading {path}: {message}")]
    Io { path: String, message: String },
}

/// Named token bound by a successful parse.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Binding {
    pub name: String,
    /// Matched text, `None` when the group did not participate or was blank.
    pub raw: Option<String>,
    pub value: Value,
}

/// Page position of a checkbox anchor in grid cells, hint applied.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnchorPosition {
    pub name: String,
    pub row: i64,
    pub col: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParseResult {
    pub form_id: String,
    pub bindings: Vec<Binding>,
    /// One entry per matched line of a repeated section.
    pub rows: Vec<Vec<Binding>>,
    pub anchors: Vec<AnchorPosition>,
    pub diagnostics: Vec<String>,
}

impl ParseResult {
    pub fn get(&self, name: &str) -> Option<&Binding> {
        self.bindings.iter().find(|b| b.name == name)
    }

    pub fn value(&self, name: &str) -> &Value {
        self.get(name).map_or(&Value::Missing, |b| &b.value)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum FailureKind {
    NoMatch,
    TypedValueError { field: String, raw: String, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ParseFailure {
    pub form_id: String,
    pub kind: FailureKind,
    /// Index into the page lines and the text there; the index equals the
    /// line count when the page ended early.
    pub first_unmatched_line: (usize, String),
    /// Index of the grammar line that failed to match, if any.
    pub failed_element: Option<usize>,
    pub matched_prefix_lines: usize,
}

/// Build a grammar from its parts, checking token uniqueness and that
/// every pattern compiles.
pub fn compose_grammar(
    form_id: &str,
    title_pattern: &str,
    lines: Vec<LineTemplate>,
    fields: Vec<FieldSpec>,
) -> Result<FormGrammar, GrammarError> {
    template::compose(form_id, title_pattern, lines, fields)
}

/// Page lines as matched by the composed pattern: each line ends in `\n`.
pub fn page_text(lines: &[String]) -> String {
    let mut s = String::with_capacity(lines.iter().map(|l| l.len() + 1).sum());
    for l in lines {
        s.push_str(l);
        s.push('\n');
    }
    s
}

pub fn parse_form(grammar: &FormGrammar, lines: &[String]) -> Result<ParseResult, ParseFailure> {
    matcher::parse(grammar, lines)
}
