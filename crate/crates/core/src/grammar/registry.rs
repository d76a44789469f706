use std::path::Path;

use super::{parse_grammar_file, FormGrammar, GrammarError};

/// Lines inspected for a title when identifying a page.
pub const TITLE_SCAN_LINES: usize = 5;

/// Grammar files compiled into the library, by file name.
pub const BUILTIN_GRAMMARS: &[(&str, &str)] = &[
    ("pre_operative_management.grammar", include_str!("../../grammars/pre_operative_management.grammar")),
    ("dcd_flowsheet.grammar", include_str!("../../grammars/dcd_flowsheet.grammar")),
    ("flowsheet.grammar", include_str!("../../grammars/flowsheet.grammar")),
    ("vital_signs.grammar", include_str!("../../grammars/vital_signs.grammar")),
    ("vent_settings.grammar", include_str!("../../grammars/vent_settings.grammar")),
    ("intake.grammar", include_str!("../../grammars/intake.grammar")),
    ("medications_dosage.grammar", include_str!("../../grammars/medications_dosage.grammar")),
    ("output.grammar", include_str!("../../grammars/output.grammar")),
    ("comments.grammar", include_str!("../../grammars/comments.grammar")),
    ("kidney_perfusion_flow_sheet.grammar", include_str!("../../grammars/kidney_perfusion_flow_sheet.grammar")),
    ("liver_data.grammar", include_str!("../../grammars/liver_data.grammar")),
    ("referral_worksheet.grammar", include_str!("../../grammars/referral_worksheet.grammar")),
];

/// Immutable set of grammars, most specific first.
#[derive(Debug, Clone)]
pub struct Registry {
    grammars: Vec<FormGrammar>,
}

impl Registry {
    /// Order by descending priority; ties keep the given order.
    pub fn new(mut grammars: Vec<FormGrammar>) -> Result<Self, GrammarError> {
        if grammars.is_empty() {
            return Err(GrammarError::EmptyRegistry);
        }
        let mut seen = std::collections::HashSet::new();
        for g in &grammars {
            if !seen.insert(g.form_id.as_str()) {
                return Err(GrammarError::DuplicateTokenName(g.form_id.clone()));
            }
        }
        grammars.sort_by_key(|g| std::cmp::Reverse(g.priority));
        Ok(Registry { grammars })
    }

    pub fn builtin() -> Result<Self, GrammarError> {
        let grammars = BUILTIN_GRAMMARS
            .iter()
            .map(|(name, src)| parse_grammar_file(src).map_err(|e| with_file(name, e)))
            .collect::<Result<Vec<_>, _>>()?;
        Registry::new(grammars)
    }

    /// Every `*.grammar` file in `dir`, in file-name order.
    pub fn from_dir(dir: &Path) -> Result<Self, GrammarError> {
        let io = |e: std::io::Error| GrammarError::Io { path: dir.display().to_string(), message: e.to_string() };
        let mut paths: Vec<_> = std::fs::read_dir(dir)
            .map_err(io)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "grammar"))
            .collect();
        paths.sort();
        let mut grammars = Vec::new();
        for p in paths {
            let src = std::fs::read_to_string(&p)
                .map_err(|e| GrammarError::Io { path: p.display().to_string(), message: e.to_string() })?;
            grammars.push(parse_grammar_file(&src).map_err(|e| with_file(&p.display().to_string(), e))?);
        }
        Registry::new(grammars)
    }

    pub fn grammars(&self) -> &[FormGrammar] {
        &self.grammars
    }

    pub fn get(&self, form_id: &str) -> Option<&FormGrammar> {
        self.grammars.iter().find(|g| g.form_id == form_id)
    }

    /// Replace a grammar with an edited version of the same form.
    pub fn replace(&mut self, grammar: FormGrammar) {
        if let Some(slot) = self.grammars.iter_mut().find(|g| g.form_id == grammar.form_id) {
            *slot = grammar;
        } else {
            self.grammars.push(grammar);
        }
        self.grammars.sort_by_key(|g| std::cmp::Reverse(g.priority));
    }

    pub fn identify(&self, lines: &[String]) -> Option<&FormGrammar> {
        let head: Vec<&str> =
            lines.iter().map(|l| l.trim()).filter(|l| !l.is_empty()).take(TITLE_SCAN_LINES).collect();
        self.grammars.iter().find(|g| head.iter().any(|l| g.title_regex.is_match(l)))
    }
}

fn with_file(name: &str, e: GrammarError) -> GrammarError {
    match e {
        GrammarError::Syntax { line, message } => GrammarError::Syntax { line, message: format!("{name}: {message}") },
        GrammarError::PatternCompileError { fragment, message } => {
            GrammarError::PatternCompileError { fragment, message: format!("{name}: {message}") }
        }
        other => other,
    }
}

/// Form id of the first grammar whose title appears in the page head, or
/// `None` for an unknown page.
pub fn identify_form<'a>(registry: &'a Registry, lines: &[String]) -> Option<&'a str> {
    registry.identify(lines).map(|g| g.form_id.as_str())
}
