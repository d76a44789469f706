use super::{ColumnKind, ExportError, Table};
use crate::grammar::{parse_date, parse_number, parse_time, Value};

fn encode_cell(v: &Value, kind: ColumnKind) -> String {
    match v {
        Value::Missing if kind.is_numeric() => "NaN".to_string(),
        other => other.render().unwrap_or_default(),
    }
}

/// RFC-4180 CSV with a header row and LF line endings.
pub fn to_csv(table: &Table) -> Result<Vec<u8>, ExportError> {
    table.validate()?;
    let err = |e: csv::Error| ExportError::Csv(e.to_string());
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(table.schema.columns.iter().map(|c| c.name.as_str())).map_err(err)?;
    for row in &table.rows {
        w.write_record(row.iter().zip(&table.schema.columns).map(|(v, c)| encode_cell(v, c.kind))).map_err(err)?;
    }
    w.into_inner().map_err(|e| ExportError::Csv(e.to_string()))
}

/// Inverse of the CSV cell encoding for one column kind.
pub fn decode_cell(kind: ColumnKind, raw: &str) -> Result<Value, ExportError> {
    let err = || ExportError::Decode { raw: raw.to_string(), kind };
    if raw.is_empty() {
        return Ok(Value::Missing);
    }
    Ok(match kind {
        ColumnKind::Integer | ColumnKind::Real => {
            let n = parse_number(raw).map_err(|_| err())?;
            match n {
                Some(n) if kind == ColumnKind::Integer && n.fract() != 0.0 => return Err(err()),
                Some(n) => Value::Number(n),
                None => Value::Missing,
            }
        }
        ColumnKind::Text => Value::Text(raw.to_string()),
        ColumnKind::Time => parse_time(raw).map_err(|_| err())?.map_or(Value::Missing, Value::Time),
        ColumnKind::Date => parse_date(raw).map_err(|_| err())?.map_or(Value::Missing, Value::Date),
        ColumnKind::Boolean => match raw {
            "true" => Value::Bool(true),
            "false" => Value::Bool(false),
            _ => return Err(err()),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::export::fixtures::vitals_like;
    use crate::export::{Column, TableSchema};

    #[test]
    fn quoting_and_missing() {
        let csv = String::from_utf8(to_csv(&vitals_like()).unwrap()).unwrap();
        assert_eq!(
            csv,
            "Minute,Time,HR,BP Systolic\n0,2022-01-01 09:47 EST,100,170\n1,\"a, \"\"b\"\"\",0,NaN\n2,,98.6,NaN\n"
        );
    }

    #[test]
    fn header_only_when_empty() {
        let mut t = vitals_like();
        t.rows.clear();
        assert_eq!(to_csv(&t).unwrap(), b"Minute,Time,HR,BP Systolic\n");
    }

    #[test]
    fn decode_inverts_encode() {
        let t = vitals_like();
        for row in &t.rows {
            for (v, c) in row.iter().zip(&t.schema.columns) {
                assert_eq!(&decode_cell(c.kind, &encode_cell(v, c.kind)).unwrap(), v);
            }
        }
        assert_eq!(decode_cell(ColumnKind::Boolean, "true").unwrap(), Value::Bool(true));
        assert!(decode_cell(ColumnKind::Integer, "1.5").is_err());
        assert!(decode_cell(ColumnKind::Time, "25:00").is_err());
    }

    #[test]
    fn schema_mismatch_is_reported() {
        let mut t = Table::new(TableSchema::new("t", vec![Column::new("a", ColumnKind::Real)]));
        t.rows.push(vec![Value::Text("x".into())]);
        assert!(matches!(to_csv(&t), Err(ExportError::SchemaMismatch { .. })));
    }
}
