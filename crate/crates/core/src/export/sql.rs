use super::{ExportError, Table};
use crate::grammar::Value;
use crate::pdf::format_number;

/// `"name"` with embedded quotes doubled; any string is a valid identifier.
pub fn quote_identifier(name: &str) -> String {
    format!("\"{}\"", name.replace('"', "\"\""))
}

fn literal(v: &Value) -> String {
    match v {
        Value::Missing => "NULL".to_string(),
        Value::Number(n) => format_number(*n),
        Value::Bool(b) => if *b { "1" } else { "0" }.to_string(),
        other => format!("'{}'", other.render().unwrap_or_default().replace('\'', "''")),
    }
}

/// Schema and data for `tables` as plain SQL: one `CREATE TABLE` per table
/// followed by its `INSERT` statements.
pub fn to_sql_dump(tables: &[Table]) -> Result<Vec<u8>, ExportError> {
    let mut out = String::from("-- donorpdf SQL dump\n");
    for t in tables {
        t.validate()?;
        let s = &t.schema;
        out.push('\n');
        out.push_str(&format!("CREATE TABLE {} (\n", quote_identifier(&s.name)));
        let mut defs: Vec<String> = s
            .columns
            .iter()
            .map(|c| {
                let null = if c.nullable { "" } else { " NOT NULL" };
                format!("  {} {}{null}", quote_identifier(&c.name), c.kind.affinity().sql_type())
            })
            .collect();
        if !s.primary_key.is_empty() {
            let pk: Vec<String> = s.primary_key.iter().map(|k| quote_identifier(k)).collect();
            defs.push(format!("  PRIMARY KEY ({})", pk.join(", ")));
        }
        out.push_str(&defs.join(",\n"));
        out.push_str("\n);\n");
        let cols: Vec<String> = s.columns.iter().map(|c| quote_identifier(&c.name)).collect();
        let cols = cols.join(", ");
        for row in &t.rows {
            let vals: Vec<String> = row.iter().map(literal).collect();
            out.push_str(&format!("INSERT INTO {} ({cols}) VALUES ({});\n", quote_identifier(&s.name), vals.join(", ")));
        }
    }
    Ok(out.into_bytes())
}
