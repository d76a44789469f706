use super::{compose_grammar, FieldKind, FieldSpec, FormGrammar, GrammarError, LineTemplate, Repeat};

#[derive(PartialEq)]
enum Section {
    Header,
    Lines,
    Fields,
}

fn syntax(line: usize, message: impl Into<String>) -> GrammarError {
    GrammarError::Syntax { line, message: message.into() }
}

/// Parse one `.grammar` file.
pub fn parse_grammar_file(src: &str) -> Result<FormGrammar, GrammarError> {
    let mut section = Section::Header;
    let mut form_id = None;
    let mut title = None;
    let mut part_of = None;
    let mut table: Option<Option<String>> = None;
    let mut priority = 0;
    let mut lines = Vec::new();
    let mut fields = Vec::new();

    for (idx, raw) in src.lines().enumerate() {
        let n = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match line {
            "LINES" => {
                section = Section::Lines;
                continue;
            }
            "FIELDS" => {
                section = Section::Fields;
                continue;
            }
            _ => {}
        }
        match section {
            Section::Header => {
                let (key, rest) = line.split_once(' ').map_or((line, ""), |(k, r)| (k, r.trim()));
                match key {
                    "FORM" => form_id = Some(rest.to_string()),
                    "TITLE" => title = Some(rest.to_string()),
                    "PART_OF" => part_of = Some(rest.to_string()),
                    "TABLE" => table = Some(if rest == "-" { None } else { Some(rest.to_string()) }),
                    "PRIORITY" => priority = rest.parse().map_err(|_| syntax(n, "PRIORITY needs an integer"))?,
                    other => return Err(syntax(n, format!("unknown directive `{other}`"))),
                }
            }
            Section::Lines => lines.push(parse_line(line)),
            Section::Fields => fields.push(parse_field(line, n)?),
        }
    }
    let form_id = form_id.filter(|f| !f.is_empty()).ok_or_else(|| syntax(0, "missing FORM"))?;
    let title = title.filter(|t| !t.is_empty()).ok_or_else(|| syntax(0, "missing TITLE"))?;
    let mut g = compose_grammar(&form_id, &title, lines, fields)?;
    g.part_of = part_of;
    g.table = table.unwrap_or(Some(form_id));
    g.priority = priority;
    Ok(g)
}

/// `*` repeated, `?` optional, `=` exact spacing; markers end at the first space.
fn parse_line(line: &str) -> LineTemplate {
    let mut t = LineTemplate::one(line);
    if let Some((markers, rest)) = line.split_once(' ') {
        if !markers.is_empty() && markers.chars().all(|c| matches!(c, '*' | '?' | '=')) {
            for c in markers.chars() {
                match c {
                    '*' => t.repeat = Repeat::Many,
                    '?' => t.repeat = Repeat::Optional,
                    _ => t.exact = true,
                }
            }
            t.text = rest.trim_start().to_string();
        }
    }
    if t.text.starts_with("\\#") {
        t.text.remove(0);
    }
    t
}

fn parse_field(line: &str, n: usize) -> Result<FieldSpec, GrammarError> {
    let words = split_words(line);
    let mut parts = words.iter().map(String::as_str);
    let name = parts.next().ok_or_else(|| syntax(n, "empty field line"))?;
    let kind: FieldKind = parts
        .next()
        .ok_or_else(|| syntax(n, format!("field `{name}` has no kind")))?
        .parse()
        .map_err(|e: GrammarError| match e {
            GrammarError::Syntax { message, .. } => syntax(n, message),
            other => other,
        })?;
    let mut f = FieldSpec::new(name, kind, "");
    for part in parts {
        if let Some(a) = part.strip_prefix("anchor=") {
            let (r, c) = a.split_once(',').ok_or_else(|| syntax(n, "anchor=ROW,COL"))?;
            let r = r.parse().map_err(|_| syntax(n, "anchor row must be an integer"))?;
            let c = c.parse().map_err(|_| syntax(n, "anchor column must be an integer"))?;
            f.anchor_hint = Some((r, c));
        } else if let Some(c) = part.strip_prefix("canon=") {
            for entry in c.split(';').filter(|e| !e.is_empty()) {
                let (label, variants) = entry.split_once(':').ok_or_else(|| syntax(n, "canon=Label:a|b;Label2:c"))?;
                f.canon.push((label.to_string(), variants.split('|').filter(|v| !v.is_empty()).map(String::from).collect()));
            }
        } else if f.pattern.is_empty() && part != "-" {
            f.pattern = part.to_string();
        } else if part != "-" {
            return Err(syntax(n, format!("unexpected `{part}` (spaces in patterns must sit inside a class like [ ])")));
        }
    }
    if f.pattern.is_empty() && kind != FieldKind::CheckboxAnchor {
        return Err(syntax(n, format!("field `{name}` has no pattern")));
    }
    Ok(f)
}

/// Split on whitespace outside `[...]` classes, so `[ ]` stays in one word.
fn split_words(line: &str) -> Vec<String> {
    let mut words = Vec::new();
    let mut cur = String::new();
    let mut in_class = false;
    let mut escaped = false;
    for c in line.chars() {
        if escaped {
            cur.push(c);
            escaped = false;
            continue;
        }
        match c {
            '\\' => {
                escaped = true;
                cur.push(c);
            }
            '[' if !in_class => {
                in_class = true;
                cur.push(c);
            }
            ']' if in_class && !cur.ends_with('[') && !cur.ends_with("[^") => {
                in_class = false;
                cur.push(c);
            }
            c if c.is_whitespace() && !in_class => {
                if !cur.is_empty() {
                    words.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if !cur.is_empty() {
        words.push(cur);
    }
    words
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
# sample
FORM sample
PART_OF parent
PRIORITY 5
TITLE SAMPLE FORM
LINES
SAMPLE FORM
Extubated:[ ]*{extubated}
* {minute} {hr}
?= Note: {note}
\# literal hash
FIELDS
extubated Categorical (?:Yes|No|Y|N)? canon=Yes:Y|YES;No:N|NO
minute    Number      [0-9]+
hr        Number      [0-9]+|NaN
note      FreeText    [a-z]+
"#;

    #[test]
    fn reads_all_sections() {
        let g = parse_grammar_file(SAMPLE).unwrap();
        assert_eq!(g.form_id, "sample");
        assert_eq!(g.part_of.as_deref(), Some("parent"));
        assert_eq!(g.table.as_deref(), Some("sample"));
        assert_eq!(g.priority, 5);
        assert_eq!(g.line_patterns.len(), 5);
        assert_eq!(g.line_patterns[2].template.repeat, Repeat::Many);
        assert_eq!(g.line_patterns[3].template.repeat, Repeat::Optional);
        assert!(g.line_patterns[3].template.exact);
        assert_eq!(g.line_patterns[4].template.text, "# literal hash");
        assert_eq!(g.field("extubated").unwrap().canon[0], ("Yes".to_string(), vec!["Y".to_string(), "YES".to_string()]));
    }

    #[test]
    fn table_dash_means_no_table() {
        let src = SAMPLE.replace("PRIORITY 5", "TABLE -");
        assert_eq!(parse_grammar_file(&src).unwrap().table, None);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let src = SAMPLE.replace("minute    Number      [0-9]+", "minute    Numeric     [0-9]+");
        assert!(matches!(parse_grammar_file(&src), Err(GrammarError::Syntax { line: 15, .. })));
        let src = SAMPLE.replace("[a-z]+", "[a-z]+ extra");
        assert!(matches!(parse_grammar_file(&src), Err(GrammarError::Syntax { .. })));
        assert!(parse_grammar_file("LINES\nA\n").is_err());
    }

    #[test]
    fn spaces_inside_classes_stay_in_the_pattern() {
        assert_eq!(split_words("a Number [0-9]+(?:[ ]mg)? x"), vec!["a", "Number", "[0-9]+(?:[ ]mg)?", "x"]);
        assert_eq!(split_words(r"b FreeText [^ ]+\ y"), vec!["b", "FreeText", r"[^ ]+\ y"]);
    }
}
