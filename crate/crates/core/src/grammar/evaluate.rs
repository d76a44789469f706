use serde::Serialize;

use super::{parse_form, FailureKind, FormGrammar, GrammarError};

/// Failures sharing the grammar line they stopped at and the shape of the
/// page line found there.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FailureCluster {
    pub failed_element: Option<usize>,
    pub shape: String,
    pub count: usize,
    /// Corpus indices of the failing pages.
    pub pages: Vec<usize>,
    pub example_line: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvaluationReport {
    pub form_id: String,
    pub total: usize,
    pub parsed: usize,
    pub parse_rate: f64,
    /// Largest cluster first.
    pub clusters: Vec<FailureCluster>,
}

/// Shape of a line for clustering: its labels (words ending in `:`), or the
/// text with digit runs collapsed when it has no labels.
pub(super) fn line_shape(line: &str) -> String {
    let labels: Vec<&str> = line.split_whitespace().filter(|w| w.ends_with(':')).collect();
    if !labels.is_empty() {
        return labels.join(" ");
    }
    let mut out = String::new();
    let mut prev_digit = false;
    for w in line.split_whitespace() {
        if !out.is_empty() {
            out.push(' ');
        }
        for c in w.chars() {
            if c.is_ascii_digit() {
                if !prev_digit {
                    out.push('9');
                }
                prev_digit = true;
            } else {
                out.push(c);
                prev_digit = false;
            }
        }
        prev_digit = false;
    }
    out
}

/// Parse every page of `corpus` with `grammar` and group the failures.
pub fn evaluate_grammar(grammar: &FormGrammar, corpus: &[Vec<String>]) -> Result<EvaluationReport, GrammarError> {
    if corpus.is_empty() {
        return Err(GrammarError::EmptyCorpus);
    }
    let mut parsed = 0;
    let mut clusters: Vec<FailureCluster> = Vec::new();
    for (page, lines) in corpus.iter().enumerate() {
        let failure = match parse_form(grammar, lines) {
            Ok(_) => {
                parsed += 1;
                continue;
            }
            Err(f) => f,
        };
        let shape = match &failure.kind {
            FailureKind::NoMatch => line_shape(&failure.first_unmatched_line.1),
            FailureKind::TypedValueError { field, .. } => format!("value of {field}"),
        };
        let key = failure.failed_element;
        match clusters.iter_mut().find(|c| c.failed_element == key && c.shape == shape) {
            Some(c) => {
                c.count += 1;
                c.pages.push(page);
            }
            None => clusters.push(FailureCluster {
                failed_element: key,
                shape,
                count: 1,
                pages: vec![page],
                example_line: failure.first_unmatched_line.1.clone(),
            }),
        }
    }
    clusters.sort_by(|a, b| b.count.cmp(&a.count).then(a.pages[0].cmp(&b.pages[0])));
    Ok(EvaluationReport {
        form_id: grammar.form_id.clone(),
        total: corpus.len(),
        parsed,
        parse_rate: parsed as f64 / corpus.len() as f64,
        clusters,
    })
}
