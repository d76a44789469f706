use serde_json::{Map, Value as Json};

use super::{decode_cell, ColumnKind, ExportError, Table, TableSchema};
use crate::grammar::Value;

/// One object per row, keys in column order.
pub fn to_json(table: &Table) -> Result<Json, ExportError> {
    table.validate()?;
    let rows = table
        .rows
        .iter()
        .map(|row| {
            let obj: Map<String, Json> = table
                .schema
                .columns
                .iter()
                .zip(row)
                .map(|(c, v)| (c.name.clone(), serde_json::to_value(v).unwrap_or(Json::Null)))
                .collect();
            Json::Object(obj)
        })
        .collect();
    Ok(Json::Array(rows))
}

/// Object keyed by table name, pretty printed with a trailing newline.
pub fn to_json_document(tables: &[Table]) -> Result<Vec<u8>, ExportError> {
    let mut doc = Map::new();
    for t in tables {
        doc.insert(t.schema.name.clone(), to_json(t)?);
    }
    let mut out = serde_json::to_vec_pretty(&Json::Object(doc)).unwrap_or_default();
    out.push(b'\n');
    Ok(out)
}

/// Rebuild a table from the output of [`to_json`].
pub fn from_json(json: &Json, schema: &TableSchema) -> Result<Table, ExportError> {
    let bad = |row: usize, message: String| ExportError::SchemaMismatch { table: schema.name.clone(), row, message };
    let rows = json.as_array().ok_or_else(|| bad(0, "expected an array of rows".into()))?;
    let mut table = Table::new(schema.clone());
    for (i, row) in rows.iter().enumerate() {
        let obj = row.as_object().ok_or_else(|| bad(i, "row is not an object".into()))?;
        if obj.len() != schema.columns.len() {
            return Err(bad(i, format!("{} keys for {} columns", obj.len(), schema.columns.len())));
        }
        let mut values = Vec::with_capacity(schema.columns.len());
        for c in &schema.columns {
            let v = obj.get(&c.name).ok_or_else(|| bad(i, format!("missing key `{}`", c.name)))?;
            values.push(match (v, c.kind) {
                (Json::Null, _) => Value::Missing,
                (Json::Number(n), ColumnKind::Integer | ColumnKind::Real) => {
                    Value::Number(n.as_f64().ok_or_else(|| bad(i, format!("bad number in `{}`", c.name)))?)
                }
                (Json::Bool(b), ColumnKind::Boolean) => Value::Bool(*b),
                (Json::String(s), ColumnKind::Text | ColumnKind::Time | ColumnKind::Date) => decode_cell(c.kind, s)?,
                (other, kind) => return Err(bad(i, format!("`{}`: {other} is not {kind:?}", c.name))),
            });
        }
        table.rows.push(values);
    }
    table.validate()?;
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::export::fixtures::vitals_like;
    use crate::export::{Column, ColumnKind};

    #[test]
    fn missing_is_null_and_order_is_fixed() {
        let j = to_json(&vitals_like()).unwrap();
        let s = serde_json::to_string(&j[1]).unwrap();
        assert_eq!(s, r#"{"Minute":1,"Time":"a, \"b\"","HR":0,"BP Systolic":null}"#);
        assert_eq!(j[2]["HR"], serde_json::json!(98.6));
    }

    #[test]
    fn round_trip() {
        let t = vitals_like();
        let back = from_json(&to_json(&t).unwrap(), &t.schema).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn all_missing_record() {
        let schema = TableSchema::new("r", vec![Column::new("a", ColumnKind::Text), Column::new("b", ColumnKind::Real)]);
        let mut t = Table::new(schema);
        t.rows.push(vec![Value::Missing, Value::Missing]);
        assert_eq!(serde_json::to_string(&to_json(&t).unwrap()).unwrap(), r#"[{"a":null,"b":null}]"#);
    }

    #[test]
    fn byte_stable() {
        let t = vitals_like();
        let a = to_json_document(std::slice::from_ref(&t)).unwrap();
        let b = to_json_document(&[t]).unwrap();
        assert_eq!(a, b);
        assert!(a.ends_with(b"]\n}\n"));
    }
}
