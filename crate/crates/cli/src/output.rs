use crate::eval::Row;
use backhaul_core::config::OutputFormat;
use serde_json::{Map, Value};
use std::io::{self, Write};

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// Writes rows as CSV (header from the first row) or as a JSON array of
/// objects with the same keys. `generated` goes into a leading comment of
/// the CSV.
pub fn write_rows<W: Write>(mut w: W, rows: &[Row], format: OutputFormat, generated: Option<&str>) -> io::Result<()> {
    match format {
        OutputFormat::Csv => {
            if let Some(ts) = generated {
                writeln!(w, "# generated {ts}")?;
            }
            let mut out = csv::Writer::from_writer(w);
            if let Some(first) = rows.first() {
                out.write_record(first.iter().map(|(k, _)| k.as_str()))?;
            }
            for row in rows {
                out.write_record(row.iter().map(|(_, v)| cell(v)))?;
            }
            out.flush()
        }
        OutputFormat::Json => {
            let array: Vec<Value> =
                rows.iter().map(|r| Value::Object(r.iter().cloned().collect::<Map<_, _>>())).collect();
            serde_json::to_writer_pretty(&mut w, &array)?;
            writeln!(w)
        }
    }
}
