use chrono::{NaiveDate, NaiveTime};
use serde::{Serialize, Serializer};

use super::{FieldKind, FieldSpec};

/// A typed field value. `Missing` never coerces to or from zero.
#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Missing,
    Number(f64),
    Text(String),
    Time(NaiveTime),
    Date(NaiveDate),
    Bool(bool),
}

impl Value {
    pub fn is_missing(&self) -> bool {
        matches!(self, Value::Missing)
    }

    pub fn as_number(&self) -> Option<f64> {
        match self {
            Value::Number(n) => Some(*n),
            _ => None,
        }
    }

    pub fn as_text(&self) -> Option<&str> {
        match self {
            Value::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn as_time(&self) -> Option<NaiveTime> {
        match self {
            Value::Time(t) => Some(*t),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_date(&self) -> Option<NaiveDate> {
        match self {
            Value::Date(d) => Some(*d),
            _ => None,
        }
    }

    /// Text form used in exports: times as HH:MM, dates as YYYY-MM-DD.
    pub fn render(&self) -> Option<String> {
        match self {
            Value::Missing => None,
            Value::Number(n) => Some(crate::pdf::format_number(*n)),
            Value::Text(s) => Some(s.clone()),
            Value::Time(t) => Some(t.format("%H:%M").to_string()),
            Value::Date(d) => Some(d.format("%Y-%m-%d").to_string()),
            Value::Bool(b) => Some(b.to_string()),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Value::Missing => s.serialize_none(),
            Value::Number(n) if n.fract() == 0.0 && n.abs() < 9.0e15 => s.serialize_i64(*n as i64),
            Value::Number(n) => s.serialize_f64(*n),
            Value::Bool(b) => s.serialize_bool(*b),
            other => s.serialize_str(&other.render().unwrap_or_default()),
        }
    }
}

/// Decimal with optional thousands separators; `NaN` and blank are missing.
pub fn parse_number(raw: &str) -> Result<Option<f64>, String> {
    let t = raw.trim();
    if t.is_empty() || t.eq_ignore_ascii_case("nan") {
        return Ok(None);
    }
    let cleaned: String = t.chars().filter(|&c| c != ',').collect();
    match cleaned.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(Some(v)),
        _ => Err(format!("`{t}` is not a number")),
    }
}

/// `HHMM`, `H:MM` or `HH:MM`, 24-hour clock.
pub fn parse_time(raw: &str) -> Result<Option<NaiveTime>, String> {
    let t = raw.trim();
    if t.is_empty() {
        return Ok(None);
    }
    let (h, m) = match t.split_once(':') {
        Some((h, m)) if (1..=2).contains(&h.len()) && m.len() == 2 => (h, m),
        None if t.len() == 4 => (&t[..2], &t[2..]),
        _ => return Err(format!("`{t}` is not a time")),
    };
    let bad = || format!("`{t}` is not a time");
    let h: u32 = h.parse().map_err(|_| bad())?;
    let m: u32 = m.parse().map_err(|_| bad())?;
    NaiveTime::from_hms_opt(h, m, 0).map(Some).ok_or_else(bad)
}

/// `YYYY-MM-DD` or `M/D/YYYY`.
pub fn parse_date(raw: &str) -> Result<Option<NaiveDate>, String> {
    let t = raw.trim();
    if t.is_empty() {
        return Ok(None);
    }
    NaiveDate::parse_from_str(t, "%Y-%m-%d")
        .or_else(|_| NaiveDate::parse_from_str(t, "%m/%d/%Y"))
        .map(Some)
        .map_err(|_| format!("`{t}` is not a date"))
}

/// Map a categorical spelling onto its canonical label. Unknown spellings
/// come back unchanged with `false`.
pub fn canonicalize(field: &FieldSpec, raw: &str) -> (String, bool) {
    let t = raw.trim();
    for (label, variants) in &field.canon {
        if label == t || variants.iter().any(|v| v == t) {
            return (label.clone(), true);
        }
    }
    (t.to_string(), field.canon.is_empty())
}

/// Typed value for a raw capture. `Err` carries the reason a matched value
/// could not be interpreted; warnings go to `diagnostics`.
pub(super) fn typed_value(field: &FieldSpec, raw: Option<&str>, diagnostics: &mut Vec<String>) -> Result<Value, String> {
    let Some(raw) = raw.map(str::trim).filter(|r| !r.is_empty()) else {
        return Ok(Value::Missing);
    };
    Ok(match field.kind {
        FieldKind::Number => parse_number(raw)?.map_or(Value::Missing, Value::Number),
        FieldKind::Time => parse_time(raw)?.map_or(Value::Missing, Value::Time),
        FieldKind::Date => parse_date(raw)?.map_or(Value::Missing, Value::Date),
        FieldKind::Categorical => {
            let (v, known) = canonicalize(field, raw);
            if !known {
                diagnostics.push(format!("{}: unmapped categorical value `{raw}` kept as is", field.name));
            }
            Value::Text(v)
        }
        FieldKind::PersonName | FieldKind::FreeText => Value::Text(raw.to_string()),
        FieldKind::CheckboxAnchor => Value::Missing,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn yes_no() -> FieldSpec {
        let mut f = FieldSpec::new("extubated", FieldKind::Categorical, "");
        f.canon = vec![
            ("Yes".into(), vec!["Y".into(), "YES".into(), "yes".into()]),
            ("No".into(), vec!["N".into(), "NO".into(), "no".into()]),
        ];
        f
    }

    #[test]
    fn numbers() {
        assert_eq!(parse_number("30,000"), Ok(Some(30000.0)));
        assert_eq!(parse_number("0"), Ok(Some(0.0)));
        assert_eq!(parse_number("NaN"), Ok(None));
        assert_eq!(parse_number(""), Ok(None));
        assert!(parse_number("3O0").is_err());
    }

    #[test]
    fn times() {
        let t = NaiveTime::from_hms_opt(9, 35, 0).unwrap();
        assert_eq!(parse_time("0935"), Ok(Some(t)));
        assert_eq!(parse_time("09:35"), Ok(Some(t)));
        assert_eq!(parse_time("9:35"), Ok(Some(t)));
        assert!(parse_time("2599").is_err());
        assert!(parse_time("12:60").is_err());
        assert!(parse_time("935").is_err());
    }

    #[test]
    fn dates() {
        let d = NaiveDate::from_ymd_opt(2022, 1, 1).unwrap();
        assert_eq!(parse_date("2022-01-01"), Ok(Some(d)));
        assert_eq!(parse_date("1/1/2022"), Ok(Some(d)));
        assert!(parse_date("2022-13-01").is_err());
    }

    #[test]
    fn categorical_canonicalization() {
        let f = yes_no();
        assert_eq!(canonicalize(&f, "Y"), ("Yes".into(), true));
        assert_eq!(canonicalize(&f, "no"), ("No".into(), true));
        assert_eq!(canonicalize(&f, "Maybe"), ("Maybe".into(), false));
        let mut diags = Vec::new();
        assert_eq!(typed_value(&f, Some("Maybe"), &mut diags), Ok(Value::Text("Maybe".into())));
        assert_eq!(diags.len(), 1);
    }

    #[test]
    fn missing_is_not_zero() {
        let f = FieldSpec::new("hr", FieldKind::Number, "");
        assert_eq!(typed_value(&f, Some("0"), &mut vec![]), Ok(Value::Number(0.0)));
        assert_eq!(typed_value(&f, None, &mut vec![]), Ok(Value::Missing));
        assert_eq!(typed_value(&f, Some("  "), &mut vec![]), Ok(Value::Missing));
    }

    #[test]
    fn json_form() {
        assert_eq!(serde_json::to_string(&Value::Number(30000.0)).unwrap(), "30000");
        assert_eq!(serde_json::to_string(&Value::Number(2.5)).unwrap(), "2.5");
        assert_eq!(serde_json::to_string(&Value::Missing).unwrap(), "null");
        let t = Value::Time(NaiveTime::from_hms_opt(9, 35, 0).unwrap());
        assert_eq!(serde_json::to_string(&t).unwrap(), "\"09:35\"");
    }

    proptest! {
        #[test]
        fn canonicalize_is_idempotent(raw in "[A-Za-z]{0,4}") {
            let f = yes_no();
            let (once, _) = canonicalize(&f, &raw);
            let (twice, _) = canonicalize(&f, &once);
            prop_assert_eq!(once, twice);
        }
    }
}
