use super::{GridGeometry, RecordDiagnostic, RecordError};
use crate::checkbox::{CheckState, CheckboxObservation};
use crate::export::{Column, ColumnKind, Table, TableSchema};
use crate::grammar::{FieldKind, FormGrammar, ParseResult, Repeat, Value};

/// Largest distance between a checkbox centre and the anchor it binds to.
pub const ANCHOR_RADIUS_PT: f64 = 30.0;

/// One parsed form page as named values. Repeated lines become `rows`.
#[derive(Debug, Clone, PartialEq)]
pub struct FormRecord {
    pub form_id: String,
    pub page: usize,
    pub fields: Vec<(String, Value)>,
    pub rows: Vec<Vec<(String, Value)>>,
    pub diagnostics: Vec<RecordDiagnostic>,
}

/// The pre-operative management block; checkbox fields read `Yes`/`No`.
pub type PreOpRecord = FormRecord;
/// LIVER DATA; checkbox fields are booleans.
pub type LiverDataRecord = FormRecord;

impl FormRecord {
    pub fn get(&self, name: &str) -> &Value {
        self.fields.iter().find(|(n, _)| n == name).map_or(&Value::Missing, |(_, v)| v)
    }

    fn set(&mut self, name: &str, value: Value) {
        if let Some(slot) = self.fields.iter_mut().find(|(n, _)| n == name) {
            slot.1 = value;
        }
    }

    /// Rows for `schema`: one per repeated line when the grammar has them,
    /// otherwise a single row. Columns not in the record are missing.
    pub fn to_table_rows(&self, schema: &TableSchema, repeated: bool) -> Vec<Vec<Value>> {
        let lookup = |row: Option<&Vec<(String, Value)>>, name: &str| -> Value {
            if name == "page" {
                return Value::Number(self.page as f64);
            }
            row.and_then(|r| r.iter().find(|(n, _)| n == name))
                .or_else(|| self.fields.iter().find(|(n, _)| n == name))
                .map_or(Value::Missing, |(_, v)| v.clone())
        };
        if repeated {
            self.rows.iter().map(|r| schema.columns.iter().map(|c| lookup(Some(r), &c.name)).collect()).collect()
        } else {
            vec![schema.columns.iter().map(|c| lookup(None, &c.name)).collect()]
        }
    }

    pub fn to_table(&self, grammar: &FormGrammar) -> Option<Table> {
        let mut t = Table::new(form_schema(grammar)?);
        t.rows = self.to_table_rows(&t.schema, has_repeats(grammar));
        Some(t)
    }
}

fn has_repeats(g: &FormGrammar) -> bool {
    g.line_patterns.iter().any(|l| l.template.repeat == Repeat::Many)
}

fn column_kind(g: &FormGrammar, kind: FieldKind) -> ColumnKind {
    match kind {
        FieldKind::Number => ColumnKind::Real,
        FieldKind::Date => ColumnKind::Date,
        FieldKind::Time => ColumnKind::Time,
        FieldKind::CheckboxAnchor if g.form_id == "pre_operative_management" => ColumnKind::Text,
        FieldKind::CheckboxAnchor => ColumnKind::Boolean,
        _ => ColumnKind::Text,
    }
}

/// Table layout for a grammar's records: `page`, then the scalar fields,
/// then the repeated-line fields. `None` for grammars without a table.
pub fn form_schema(g: &FormGrammar) -> Option<TableSchema> {
    let name = g.table.as_deref()?;
    let mut columns = vec![Column::required("page", ColumnKind::Integer)];
    for f in g.scalar_fields().into_iter().chain(g.row_fields()) {
        columns.push(Column::new(&f.name, column_kind(g, f.kind)));
    }
    Some(TableSchema::new(name, columns))
}

/// Pair each observation with the nearest free anchor within
/// [`ANCHOR_RADIUS_PT`], closest pairs first. Returns the observation index
/// per anchor name, plus diagnostics for observations left over.
pub fn bind_checkboxes(
    parse: &ParseResult,
    checkboxes: &[CheckboxObservation],
    geometry: &GridGeometry,
) -> (Vec<(String, usize)>, Vec<RecordDiagnostic>) {
    let mut pairs = Vec::new();
    for (ai, a) in parse.anchors.iter().enumerate() {
        let (ax, ay) = geometry.point(a.row, a.col);
        for (oi, o) in checkboxes.iter().enumerate() {
            let d = (o.page_point.0 - ax).hypot(o.page_point.1 - ay);
            if d <= ANCHOR_RADIUS_PT {
                pairs.push((d, ai, oi));
            }
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)).then(a.2.cmp(&b.2)));
    let mut anchor_used = vec![false; parse.anchors.len()];
    let mut obs_used = vec![false; checkboxes.len()];
    let mut bound = Vec::new();
    for (_, ai, oi) in pairs {
        if !anchor_used[ai] && !obs_used[oi] {
            anchor_used[ai] = true;
            obs_used[oi] = true;
            bound.push((parse.anchors[ai].name.clone(), oi));
        }
    }
    let diagnostics = checkboxes
        .iter()
        .zip(&obs_used)
        .filter(|(_, used)| !**used)
        .map(|(o, _)| RecordDiagnostic::UnassignedCheckbox { label: o.label, x: o.page_point.0, y: o.page_point.1 })
        .collect();
    (bound, diagnostics)
}

fn base_record(grammar: &FormGrammar, parse: &ParseResult) -> Result<FormRecord, RecordError> {
    if parse.form_id != grammar.form_id {
        return Err(RecordError::WrongForm { expected: grammar.form_id.clone(), found: parse.form_id.clone() });
    }
    let fields = grammar.scalar_fields().iter().map(|f| (f.name.clone(), parse.value(&f.name).clone())).collect();
    let rows = parse
        .rows
        .iter()
        .map(|r| r.iter().map(|b| (b.name.clone(), b.value.clone())).collect())
        .collect();
    let diagnostics = parse.diagnostics.iter().map(|m| RecordDiagnostic::Field { message: m.clone() }).collect();
    Ok(FormRecord { form_id: parse.form_id.clone(), page: 0, fields, rows, diagnostics })
}

/// Any form: scalar and repeated values, checkboxes bound by proximity as
/// booleans.
pub fn build_form_record(
    grammar: &FormGrammar,
    parse: &ParseResult,
    checkboxes: &[CheckboxObservation],
    geometry: &GridGeometry,
) -> Result<FormRecord, RecordError> {
    let mut rec = base_record(grammar, parse)?;
    let (bound, diags) = bind_checkboxes(parse, checkboxes, geometry);
    for (name, oi) in bound {
        rec.set(&name, Value::Bool(checkboxes[oi].state == CheckState::Checked));
    }
    rec.diagnostics.extend(diags);
    Ok(rec)
}

fn yes_no(v: &Value) -> Value {
    match v.as_bool() {
        Some(true) => Value::Text("Yes".into()),
        Some(false) => Value::Text("No".into()),
        None => Value::Missing,
    }
}

/// Pre-operative block. A heparin dosage or time means heparin was given,
/// whatever its checkbox says; a contradicting box is reported.
pub fn build_preop_record(
    grammar: &FormGrammar,
    parse: &ParseResult,
    checkboxes: &[CheckboxObservation],
    geometry: &GridGeometry,
) -> Result<PreOpRecord, RecordError> {
    if parse.form_id != "pre_operative_management" {
        return Err(RecordError::WrongForm { expected: "pre_operative_management".into(), found: parse.form_id.clone() });
    }
    let mut rec = build_form_record(grammar, parse, checkboxes, geometry)?;
    for f in grammar.anchor_fields() {
        let v = yes_no(rec.get(&f.name));
        rec.set(&f.name, v);
    }
    let evidence = !rec.get("heparin_dosage").is_missing() || !rec.get("heparin_time").is_missing();
    if evidence {
        if rec.get("heparin").as_text() == Some("No") {
            rec.diagnostics.push(RecordDiagnostic::ConflictingEvidence {
                field: "heparin".into(),
                message: "box unchecked but a dosage or time is given; recorded as Yes".into(),
            });
        }
        rec.set("heparin", Value::Text("Yes".into()));
    }
    Ok(rec)
}

/// LIVER DATA: the i-th checkbox in reading order binds to the i-th
/// declared anchor. Every anchor needs exactly one box.
pub fn build_liver_record(
    grammar: &FormGrammar,
    parse: &ParseResult,
    checkboxes: &[CheckboxObservation],
) -> Result<LiverDataRecord, RecordError> {
    if parse.form_id != "liver_data" {
        return Err(RecordError::WrongForm { expected: "liver_data".into(), found: parse.form_id.clone() });
    }
    let anchors = grammar.anchor_fields();
    if checkboxes.len() != anchors.len() {
        return Err(RecordError::CheckboxCountMismatch { expected: anchors.len(), found: checkboxes.len() });
    }
    let mut rec = base_record(grammar, parse)?;
    for (f, o) in anchors.iter().zip(checkboxes) {
        rec.set(&f.name, Value::Bool(o.state == CheckState::Checked));
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grammar::{parse_form, Registry};

    const H: f64 = 792.0;

    fn geometry() -> GridGeometry {
        GridGeometry::new(6.0, 12.0, H)
    }

    fn obs(label: u32, x: f64, y: f64, checked: bool) -> CheckboxObservation {
        CheckboxObservation {
            label,
            bbox: (0, 0, 79, 79),
            pixel_count: if checked { 4000 } else { 1200 },
            fill_fraction: 0.0,
            state: if checked { CheckState::Checked } else { CheckState::Unchecked },
            page_point: (x, y),
        }
    }

    fn preop_lines(dosage: &str, time: &str) -> Vec<String> {
        [
            "DCD FLOWSHEET",
            "PRE-OPERATIVE MANAGEMENT",
            "Donor ID: ABCD123          Procedure Date: 2022-01-01",
            "Withdrawal Location: OR    Withdrawal Time: 09:40",
            "Extubated: Yes             Extubation Time: 09:45",
            "Family Present:",
            "Comfort Medication: Yes    Morphine: 4 mg",
            "Heparin:",
            &format!("Dosage: {dosage}   Time: {time}"),
            "Phentolamine: No",
            "Attending Physician: Dr. Ann Lee",
            "Declaring Physician: Dr. Bo Chan",
            "Asystole Time: 09:59       Time of Death: 10:04",
            "Incision Time: 10:10       Cross Clamp Time: 10:14",
            "Flush Solution: UW         Flush Volume: 3000 mL",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }

    fn preop(dosage: &str, time: &str, boxes: &[CheckboxObservation]) -> PreOpRecord {
        let reg = Registry::builtin().unwrap();
        let g = reg.get("pre_operative_management").unwrap();
        let p = parse_form(g, &preop_lines(dosage, time)).unwrap();
        build_preop_record(g, &p, boxes, &geometry()).unwrap()
    }

    // Heparin anchor: line 7, just after "Heparin:" (col 8) plus the hint.
    fn heparin_point() -> (f64, f64) {
        geometry().point(7, 11)
    }

    #[test]
    fn dosage_implies_heparin() {
        let r = preop("30000 units", "0935", &[]);
        assert_eq!(r.get("heparin"), &Value::Text("Yes".into()));
        assert_eq!(r.get("heparin_dosage"), &Value::Number(30000.0));
        assert_eq!(r.get("heparin_unit"), &Value::Text("units".into()));
    }

    #[test]
    fn no_evidence_is_missing() {
        let r = preop("", "", &[]);
        assert_eq!(r.get("heparin"), &Value::Missing);
        assert_eq!(r.get("family_present"), &Value::Missing);
    }

    #[test]
    fn checked_box_without_dosage() {
        let (x, y) = heparin_point();
        let r = preop("", "", &[obs(1, x + 2.0, y + 3.0, true)]);
        assert_eq!(r.get("heparin"), &Value::Text("Yes".into()));
        assert_eq!(r.get("heparin_dosage"), &Value::Missing);
        assert!(r.diagnostics.is_empty());
    }

    #[test]
    fn unchecked_box_with_dosage_conflicts() {
        let (x, y) = heparin_point();
        let r = preop("5000 U", "", &[obs(1, x, y, false)]);
        assert_eq!(r.get("heparin"), &Value::Text("Yes".into()));
        assert!(matches!(r.diagnostics[0], RecordDiagnostic::ConflictingEvidence { .. }));
        let r = preop("", "", &[obs(1, x, y, false)]);
        assert_eq!(r.get("heparin"), &Value::Text("No".into()));
    }

    #[test]
    fn distant_box_is_unassigned() {
        let r = preop("", "", &[obs(4, 500.0, 100.0, true)]);
        assert_eq!(r.get("heparin"), &Value::Missing);
        assert!(matches!(r.diagnostics[0], RecordDiagnostic::UnassignedCheckbox { label: 4, .. }));
    }

    fn liver_lines() -> Vec<String> {
        [
            "LIVER DATA",
            "Donor ID: ABCD123   Recovery Date: 2022-01-02",
            "Liver Weight: 1450 g   Surgeon: Dr. Ann Lee",
            "Appearance: Normal",
            "Biopsy:      Macrosteatosis:      Microsteatosis:      Fibrosis:",
            "",
            "Inflammation:      Necrosis:      Cholestasis:      Vascular Anomaly:",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect()
    }

    fn liver(states: &[bool]) -> Result<LiverDataRecord, RecordError> {
        let reg = Registry::builtin().unwrap();
        let g = reg.get("liver_data").unwrap();
        let p = parse_form(g, &liver_lines()).unwrap();
        let boxes: Vec<_> = states.iter().enumerate().map(|(i, &c)| obs(i as u32 + 1, 0.0, 0.0, c)).collect();
        build_liver_record(g, &p, &boxes)
    }

    #[test]
    fn liver_binds_in_order() {
        let r = liver(&[true, false, true, false, false, false, true, false]).unwrap();
        assert_eq!(r.get("biopsy"), &Value::Bool(true));
        assert_eq!(r.get("macro_steatosis"), &Value::Bool(false));
        assert_eq!(r.get("micro_steatosis"), &Value::Bool(true));
        assert_eq!(r.get("cholestasis"), &Value::Bool(true));
        assert_eq!(r.get("vascular_anomaly"), &Value::Bool(false));
        let all_off = liver(&[false; 8]).unwrap();
        assert!(all_off.fields.iter().filter(|(_, v)| v.as_bool().is_some()).all(|(_, v)| v == &Value::Bool(false)));
    }

    #[test]
    fn liver_needs_eight() {
        assert_eq!(liver(&[true; 7]), Err(RecordError::CheckboxCountMismatch { expected: 8, found: 7 }));
    }

    #[test]
    fn schemas() {
        let reg = Registry::builtin().unwrap();
        let s = form_schema(reg.get("pre_operative_management").unwrap()).unwrap();
        assert_eq!(s.columns.len(), 23);
        assert_eq!(s.columns[s.column_index("heparin").unwrap()].kind, ColumnKind::Text);
        let s = form_schema(reg.get("liver_data").unwrap()).unwrap();
        assert_eq!(s.columns[s.column_index("biopsy").unwrap()].kind, ColumnKind::Boolean);
        assert!(form_schema(reg.get("flowsheet").unwrap()).is_none());
        let r = preop("30000 units", "0935", &[]);
        let t = r.to_table(reg.get("pre_operative_management").unwrap()).unwrap();
        assert_eq!(t.rows.len(), 1);
        t.validate().unwrap();
    }
}
