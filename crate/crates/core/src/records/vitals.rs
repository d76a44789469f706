use chrono::NaiveDateTime;

use super::{RecordDiagnostic, RecordError};
use crate::export::{Column, ColumnKind, Table, TableSchema};
use crate::grammar::{ParseResult, Value};

/// Local date-time with its zone label carried verbatim, never converted.
#[derive(Debug, Clone, PartialEq)]
pub struct Timestamp {
    pub local: NaiveDateTime,
    pub zone: Option<String>,
}

impl std::fmt::Display for Timestamp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.local.format("%Y-%m-%d %H:%M"))?;
        if let Some(z) = &self.zone {
            write!(f, " {z}")?;
        }
        Ok(())
    }
}

/// `YYYY-MM-DD HH:MM[ ZONE]`.
pub fn parse_timestamp(raw: &str) -> Option<Timestamp> {
    let mut parts = raw.split_whitespace();
    let date = parts.next()?;
    let time = parts.next()?;
    let zone = parts.next().map(str::to_string);
    if parts.next().is_some() {
        return None;
    }
    let local = NaiveDateTime::parse_from_str(&format!("{date} {time}"), "%Y-%m-%d %H:%M").ok()?;
    Some(Timestamp { local, zone })
}

#[derive(Debug, Clone, PartialEq)]
pub struct VitalsSeriesRow {
    pub minute: i64,
    /// The time cell as printed.
    pub time: String,
    pub timestamp: Option<Timestamp>,
    pub hr: Option<f64>,
    pub bp_systolic: Option<f64>,
    pub bp_diastolic: Option<f64>,
    pub map: Option<f64>,
    pub rr: Option<f64>,
    pub sao2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VitalsTable {
    pub rows: Vec<VitalsSeriesRow>,
    pub diagnostics: Vec<RecordDiagnostic>,
}

pub fn vitals_schema() -> TableSchema {
    let real = |n: &str| Column::new(n, ColumnKind::Real);
    TableSchema::new(
        "dcd_flowsheet",
        vec![
            Column::required("Minute", ColumnKind::Integer),
            Column::new("Time", ColumnKind::Text),
            real("HR"),
            real("BP_Systolic"),
            real("BP_Diastolic"),
            real("MAP"),
            real("RR"),
            real("SaO2"),
        ],
    )
}

impl VitalsTable {
    pub fn to_table(&self) -> Table {
        let num = |v: Option<f64>| v.map_or(Value::Missing, Value::Number);
        let mut t = Table::new(vitals_schema());
        for r in &self.rows {
            t.rows.push(vec![
                Value::Number(r.minute as f64),
                if r.time.is_empty() { Value::Missing } else { Value::Text(r.time.clone()) },
                num(r.hr),
                num(r.bp_systolic),
                num(r.bp_diastolic),
                num(r.map),
                num(r.rr),
                num(r.sao2),
            ]);
        }
        t
    }
}

/// One row per table line. Minute and timestamp irregularities are
/// recorded, and the rows are kept.
pub fn build_vitals_table(parse: &ParseResult) -> Result<VitalsTable, RecordError> {
    if parse.form_id != "dcd_flowsheet" {
        return Err(RecordError::WrongForm { expected: "dcd_flowsheet".into(), found: parse.form_id.clone() });
    }
    let mut out = VitalsTable::default();
    for (i, row) in parse.rows.iter().enumerate() {
        let get = |name: &str| row.iter().find(|b| b.name == name).map(|b| &b.value);
        let num = |name: &str| get(name).and_then(Value::as_number);
        let Some(minute) = num("minute") else { continue };
        let time = row.iter().find(|b| b.name == "time").and_then(|b| b.raw.clone()).unwrap_or_default();
        let timestamp = parse_timestamp(&time);
        if timestamp.is_none() {
            out.diagnostics.push(RecordDiagnostic::InvalidTimestamp { row: i, raw: time.clone() });
        }
        out.rows.push(VitalsSeriesRow {
            minute: minute as i64,
            time,
            timestamp,
            hr: num("hr"),
            bp_systolic: num("bp_systolic"),
            bp_diastolic: num("bp_diastolic"),
            map: num("map"),
            rr: num("rr"),
            sao2: num("sao2"),
        });
    }
    for i in 1..out.rows.len() {
        let (prev, cur) = (&out.rows[i - 1], &out.rows[i]);
        if cur.minute != prev.minute + 1 {
            out.diagnostics.push(RecordDiagnostic::NonMonotonicMinute { row: i, previous: prev.minute, minute: cur.minute });
        }
        if let (Some(a), Some(b)) = (&prev.timestamp, &cur.timestamp) {
            let minutes = (b.local - a.local).num_minutes();
            if minutes != 1 {
                out.diagnostics.push(RecordDiagnostic::TimestampGap { row: i, minutes });
            }
        }
    }
    Ok(out)
}
