use std::collections::HashSet;

use regex::Regex;
use regex_syntax::hir::{Class, Hir, HirKind};

use super::{FieldKind, FieldSpec, FormGrammar, GrammarError, LinePattern, LineTemplate, Repeat};

/// Blank lines allowed between (and after) grammar lines.
const BLANKS: &str = "(?:[ ]*\n)*";

fn compile_error(fragment: &str, message: impl ToString) -> GrammarError {
    GrammarError::PatternCompileError { fragment: fragment.to_string(), message: message.to_string() }
}

fn is_ident_start(c: char) -> bool {
    c.is_ascii_lowercase() || c == '_'
}

fn is_ident(c: char) -> bool {
    c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_'
}

/// Expand `{token}` placeholders and whitespace in one line template.
/// Returns the regex body and the tokens in order of appearance.
pub(super) fn expand(template: &LineTemplate, fields: &[FieldSpec]) -> Result<(String, Vec<String>), GrammarError> {
    let chars: Vec<char> = template.text.chars().collect();
    let mut out = String::new();
    let mut tokens = Vec::new();
    let mut in_class = false;
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            '\\' => {
                out.push(c);
                if let Some(&n) = chars.get(i + 1) {
                    out.push(n);
                }
                i += 2;
                continue;
            }
            '[' if !in_class => {
                in_class = true;
                out.push(c);
                // A leading `]` or `^]` is literal inside the class.
                if chars.get(i + 1) == Some(&'^') {
                    out.push('^');
                    i += 1;
                }
                if chars.get(i + 1) == Some(&']') {
                    out.push(']');
                    i += 1;
                }
            }
            ']' if in_class => {
                in_class = false;
                out.push(c);
            }
            '{' if !in_class && chars.get(i + 1).is_some_and(|&n| is_ident_start(n)) => {
                let end = (i + 1..chars.len()).find(|&j| !is_ident(chars[j]));
                match end {
                    Some(j) if chars[j] == '}' => {
                        let name: String = chars[i + 1..j].iter().collect();
                        let field = fields
                            .iter()
                            .find(|f| f.name == name)
                            .ok_or_else(|| compile_error(&template.text, format!("no field declared for `{{{name}}}`")))?;
                        if field.kind == FieldKind::CheckboxAnchor {
                            out.push_str(&format!("(?P<{name}>)"));
                        } else {
                            out.push_str(&format!("(?P<{name}>{})", field.pattern));
                        }
                        tokens.push(name);
                        i = j + 1;
                        continue;
                    }
                    _ => out.push(c),
                }
            }
            ' ' if !in_class => {
                let mut j = i;
                while j < chars.len() && chars[j] == ' ' {
                    j += 1;
                }
                if template.exact {
                    out.push_str(&"[ ]".repeat(j - i));
                } else {
                    out.push_str("[ ]+");
                }
                i = j;
                continue;
            }
            _ => out.push(c),
        }
        i += 1;
    }
    Ok((out, tokens))
}

/// True if some character class or literal in the pattern can match `\n`.
fn can_match_newline(hir: &Hir) -> bool {
    match hir.kind() {
        HirKind::Literal(lit) => lit.0.contains(&b'\n'),
        HirKind::Class(Class::Unicode(c)) => c.ranges().iter().any(|r| r.start() <= '\n' && '\n' <= r.end()),
        HirKind::Class(Class::Bytes(c)) => c.ranges().iter().any(|r| r.start() <= b'\n' && b'\n' <= r.end()),
        HirKind::Repetition(r) => can_match_newline(&r.sub),
        HirKind::Capture(c) => can_match_newline(&c.sub),
        HirKind::Concat(hs) | HirKind::Alternation(hs) => hs.iter().any(can_match_newline),
        HirKind::Empty | HirKind::Look(_) => false,
    }
}

fn wrap_line(body: &str) -> String {
    format!("[ ]*(?:{body})[ ]*")
}

pub(super) fn compose(
    form_id: &str,
    title_pattern: &str,
    lines: Vec<LineTemplate>,
    fields: Vec<FieldSpec>,
) -> Result<FormGrammar, GrammarError> {
    if lines.is_empty() {
        return Err(compile_error(form_id, "grammar has no lines"));
    }
    let mut seen = HashSet::new();
    for f in &fields {
        if !seen.insert(f.name.as_str()) {
            return Err(GrammarError::DuplicateTokenName(f.name.clone()));
        }
        if f.kind == FieldKind::CheckboxAnchor && f.anchor_hint.is_none() {
            return Err(compile_error(&f.name, "checkbox anchor needs anchor=ROW,COL"));
        }
        if f.name.starts_with("__") {
            return Err(compile_error(&f.name, "names starting with __ are reserved"));
        }
    }
    let title_regex =
        Regex::new(&format!("^(?:{title_pattern})$")).map_err(|e| compile_error(title_pattern, e))?;

    let mut used = HashSet::new();
    let mut line_patterns = Vec::with_capacity(lines.len());
    let mut composed = String::from(r"\A");
    let mut rep_index = 0;
    for template in lines {
        let (body, tokens) = expand(&template, &fields)?;
        for t in &tokens {
            if !used.insert(t.clone()) {
                return Err(GrammarError::DuplicateTokenName(t.clone()));
            }
        }
        let source = wrap_line(&body);
        let anchored = format!("^{source}$");
        let hir = regex_syntax::Parser::new().parse(&anchored).map_err(|e| compile_error(&template.text, e))?;
        if can_match_newline(&hir) {
            return Err(compile_error(&template.text, "pattern can match a line break"));
        }
        let regex = Regex::new(&anchored).map_err(|e| compile_error(&template.text, e))?;
        if regex.is_match("") {
            return Err(compile_error(&template.text, "line pattern matches a blank line"));
        }
        if template.repeat == Repeat::Many
            && tokens.iter().any(|t| fields.iter().any(|f| &f.name == t && f.kind == FieldKind::CheckboxAnchor))
        {
            return Err(compile_error(&template.text, "checkbox anchors cannot sit on a repeated line"));
        }
        let element = format!("{BLANKS}{source}\n");
        match template.repeat {
            Repeat::One => composed.push_str(&element),
            Repeat::Optional => composed.push_str(&format!("(?:{element})?")),
            Repeat::Many => {
                // Captures inside the repetition are stripped; rows are re-read line by line.
                let plain = strip_names(&element);
                composed.push_str(&format!("(?P<__rep{rep_index}>(?:{plain})*)"));
                rep_index += 1;
            }
        }
        line_patterns.push(LinePattern { template, source, tokens, regex });
    }
    composed.push_str(BLANKS);
    composed.push_str(r"\z");

    if let Some(unused) = fields.iter().find(|f| !used.contains(&f.name)) {
        return Err(compile_error(&unused.name, "field is declared but not used by any line"));
    }
    let composed_regex = Regex::new(&composed).map_err(|e| compile_error(form_id, e))?;
    Ok(FormGrammar {
        form_id: form_id.to_string(),
        part_of: None,
        table: Some(form_id.to_string()),
        priority: 0,
        title_pattern: title_pattern.to_string(),
        title_regex,
        line_patterns,
        fields,
        composed_source: composed,
        composed: composed_regex,
    })
}

/// Turn `(?P<name>` groups into non-capturing groups.
fn strip_names(src: &str) -> String {
    let re = Regex::new(r"\(\?P<[A-Za-z0-9_]+>").expect("static pattern");
    re.replace_all(src, "(?:").into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(name: &str, kind: FieldKind, pattern: &str) -> FieldSpec {
        FieldSpec::new(name, kind, pattern)
    }

    fn preop_fields() -> Vec<FieldSpec> {
        vec![
            field("extubated", FieldKind::Categorical, "(?:Yes|No)?"),
            field("heparin_dosage", FieldKind::Number, "[0-9,]*"),
            field("heparin_time", FieldKind::Time, "[0-9:]*"),
        ]
    }

    #[test]
    fn composed_contains_all_tokens() {
        let g = compose(
            "pre",
            "PRE",
            vec![
                LineTemplate::one("Extubated: {extubated}"),
                LineTemplate::one("Dosage: {heparin_dosage}"),
                LineTemplate::one("Time: {heparin_time}"),
            ],
            preop_fields(),
        )
        .unwrap();
        for t in ["extubated", "heparin_dosage", "heparin_time"] {
            assert!(g.composed_source.contains(&format!("(?P<{t}>")), "{t}");
        }
        // Composition is the concatenation of the line sources.
        let mut expected = String::from(r"\A");
        for l in &g.line_patterns {
            expected.push_str(BLANKS);
            expected.push_str(&l.source);
            expected.push('\n');
        }
        expected.push_str(BLANKS);
        expected.push_str(r"\z");
        assert_eq!(g.composed_source, expected);
    }

    #[test]
    fn empty_grammar_rejected() {
        assert!(matches!(compose("x", "X", vec![], vec![]), Err(GrammarError::PatternCompileError { .. })));
    }

    #[test]
    fn duplicate_token_rejected() {
        let fields = vec![field("time", FieldKind::Time, "[0-9]{4}")];
        let err = compose("x", "X", vec![LineTemplate::one("A {time}"), LineTemplate::one("B {time}")], fields).unwrap_err();
        assert_eq!(err, GrammarError::DuplicateTokenName("time".into()));
        let twice = vec![field("a", FieldKind::FreeText, "x"), field("a", FieldKind::FreeText, "y")];
        assert_eq!(compose("x", "X", vec![LineTemplate::one("{a}")], twice).unwrap_err(), GrammarError::DuplicateTokenName("a".into()));
    }

    #[test]
    fn bad_fragment_reported() {
        let fields = vec![field("a", FieldKind::FreeText, "(unclosed")];
        match compose("x", "X", vec![LineTemplate::one("A: {a}")], fields).unwrap_err() {
            GrammarError::PatternCompileError { fragment, .. } => assert_eq!(fragment, "A: {a}"),
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn newline_capable_patterns_rejected() {
        for pat in [r"[^x]+", r"\s+", r"\D", "(?s:.)"] {
            let fields = vec![field("a", FieldKind::FreeText, pat)];
            assert!(compose("x", "X", vec![LineTemplate::one("A: {a}")], fields).is_err(), "{pat}");
        }
        let fields = vec![field("a", FieldKind::FreeText, r"[^\n:]+")];
        assert!(compose("x", "X", vec![LineTemplate::one("A: {a}")], fields).is_ok());
    }

    #[test]
    fn blank_matching_line_rejected() {
        let fields = vec![field("a", FieldKind::FreeText, "x?")];
        assert!(compose("x", "X", vec![LineTemplate::one("{a}")], fields).is_err());
    }

    #[test]
    fn spaces_are_elastic_outside_classes() {
        let t = LineTemplate::one("Dosage:  {d} [ ]x");
        let (body, tokens) = expand(&t, &[field("d", FieldKind::Number, "[0-9]+")]).unwrap();
        assert_eq!(body, "Dosage:[ ]+(?P<d>[0-9]+)[ ]+[ ]x");
        assert_eq!(tokens, ["d"]);
        let exact = LineTemplate { exact: true, ..LineTemplate::one("A  B") };
        assert_eq!(expand(&exact, &[]).unwrap().0, "A[ ][ ]B");
    }

    #[test]
    fn regex_quantifier_braces_are_not_tokens() {
        let (body, tokens) = expand(&LineTemplate::one(r"[0-9]{4} \{a}"), &[]).unwrap();
        assert_eq!(body, r"[0-9]{4}[ ]+\{a}");
        assert!(tokens.is_empty());
    }

    #[test]
    fn undeclared_and_unused_fields() {
        assert!(compose("x", "X", vec![LineTemplate::one("A {nope}")], vec![]).is_err());
        let fields = vec![field("a", FieldKind::FreeText, "x"), field("b", FieldKind::FreeText, "y")];
        assert!(compose("x", "X", vec![LineTemplate::one("{a}")], fields).is_err());
    }

    #[test]
    fn anchors_need_hints() {
        let mut f = field("box", FieldKind::CheckboxAnchor, "");
        assert!(compose("x", "X", vec![LineTemplate::one("Heparin:{box}")], vec![f.clone()]).is_err());
        f.anchor_hint = Some((0, 2));
        assert!(compose("x", "X", vec![LineTemplate::one("Heparin:{box}")], vec![f]).is_ok());
    }
}
