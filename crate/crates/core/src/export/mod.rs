//! CSV, JSON and SQL serialization of record tables.
//!
//! Every format keeps missing values apart from zero: `NaN` (numeric) or an
//! empty field (text) in CSV, `null` in JSON, `NULL` in SQL.

mod csv;
mod json;
mod sql;

pub use self::csv::{decode_cell, to_csv};
pub use self::json::{from_json, to_json, to_json_document};
pub use self::sql::{quote_identifier, to_sql_dump};

use thiserror::Error;

use crate::grammar::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Affinity {
    Integer,
    Real,
    Text,
}

impl Affinity {
    pub fn sql_type(self) -> &'static str {
        match self {
            Affinity::Integer => "INTEGER",
            Affinity::Real => "REAL",
            Affinity::Text => "TEXT",
        }
    }
}

/// Value type of a column. Times, dates and booleans are stored with a
/// plain SQL affinity but decode back to their own [`Value`] variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnKind {
    Integer,
    Real,
    Text,
    Time,
    Date,
    Boolean,
}

impl ColumnKind {
    pub fn affinity(self) -> Affinity {
        match self {
            ColumnKind::Integer | ColumnKind::Boolean => Affinity::Integer,
            ColumnKind::Real => Affinity::Real,
            ColumnKind::Text | ColumnKind::Time | ColumnKind::Date => Affinity::Text,
        }
    }

    pub fn is_numeric(self) -> bool {
        matches!(self, ColumnKind::Integer | ColumnKind::Real)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Column {
    pub name: String,
    pub kind: ColumnKind,
    pub nullable: bool,
}

impl Column {
    pub fn new(name: &str, kind: ColumnKind) -> Self {
        Column { name: name.to_string(), kind, nullable: true }
    }

    pub fn required(name: &str, kind: ColumnKind) -> Self {
        Column { name: name.to_string(), kind, nullable: false }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableSchema {
    pub name: String,
    pub columns: Vec<Column>,
    pub primary_key: Vec<String>,
}

impl TableSchema {
    pub fn new(name: &str, columns: Vec<Column>) -> Self {
        TableSchema { name: name.to_string(), columns, primary_key: Vec::new() }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: TableSchema,
    pub rows: Vec<Vec<Value>>,
}

impl Table {
    pub fn new(schema: TableSchema) -> Self {
        Table { schema, rows: Vec::new() }
    }

    pub fn name(&self) -> &str {
        &self.schema.name
    }

    /// Check every row against the schema.
    pub fn validate(&self) -> Result<(), ExportError> {
        let mismatch = |row: usize, message: String| ExportError::SchemaMismatch {
            table: self.schema.name.clone(),
            row,
            message,
        };
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != self.schema.columns.len() {
                return Err(mismatch(i, format!("{} values for {} columns", row.len(), self.schema.columns.len())));
            }
            for (v, c) in row.iter().zip(&self.schema.columns) {
                if !conforms(v, c) {
                    return Err(mismatch(i, format!("column `{}` cannot hold {v:?}", c.name)));
                }
            }
        }
        Ok(())
    }
}

fn conforms(v: &Value, c: &Column) -> bool {
    match (v, c.kind) {
        (Value::Missing, _) => c.nullable,
        (Value::Number(n), ColumnKind::Integer) => n.fract() == 0.0,
        (Value::Number(_), ColumnKind::Real) => true,
        (Value::Text(_), ColumnKind::Text) => true,
        (Value::Time(_), ColumnKind::Time) => true,
        (Value::Date(_), ColumnKind::Date) => true,
        (Value::Bool(_), ColumnKind::Boolean) => true,
        _ => false,
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExportError {
    #[error("table `{table}` row {row}: {message}")]
    SchemaMismatch { table: String, row: usize, message: String },
    #[error("cannot decode `{raw}` as {kind:?}")]
    Decode { raw: String, kind: ColumnKind },
    #[error("csv: {0}")]
    Csv(String),
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn vitals_like() -> Table {
        let schema = TableSchema::new(
            "vitals",
            vec![
                Column::required("Minute", ColumnKind::Integer),
                Column::new("Time", ColumnKind::Text),
                Column::new("HR", ColumnKind::Real),
                Column::new("BP Systolic", ColumnKind::Real),
            ],
        );
        let mut t = Table::new(schema);
        t.rows.push(vec![Value::Number(0.0), Value::Text("2022-01-01 09:47 EST".into()), Value::Number(100.0), Value::Number(170.0)]);
        t.rows.push(vec![Value::Number(1.0), Value::Text("a, \"b\"".into()), Value::Number(0.0), Value::Missing]);
        t.rows.push(vec![Value::Number(2.0), Value::Missing, Value::Number(98.6), Value::Missing]);
        t
    }
}
