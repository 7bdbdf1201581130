//! Line-delimited JSON records of drop results.

use super::drop::DropResult;
use std::io::{self, BufRead, Write};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RecordError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: field {field}: {message}")]
    Invalid { line: usize, field: &'static str, message: String },
}

/// One record without the trailing newline.
pub fn format_record(r: &DropResult) -> String {
    serde_json::to_string(r).expect("drop results always serialize")
}

pub fn write_records<W: Write>(mut w: W, results: &[DropResult]) -> io::Result<()> {
    for r in results {
        writeln!(w, "{}", format_record(r))?;
    }
    Ok(())
}

fn check(line: usize, r: &DropResult) -> Result<(), RecordError> {
    let bad = |field, message: &str| Err(RecordError::Invalid { line, field, message: message.into() });
    for (field, v) in [
        ("sinr_access_i", r.sinr_access_i),
        ("sinr_access_o", r.sinr_access_o),
        ("sir_backhaul_i", r.sir_backhaul_i),
        ("sir_backhaul_o", r.sir_backhaul_o),
        ("threshold_backhaul_i", r.threshold_backhaul_i),
        ("threshold_backhaul_o", r.threshold_backhaul_o),
        ("r_access", r.r_access),
        ("r_backhaul", r.r_backhaul),
        ("serving_cn_power", r.serving_cn_power),
    ] {
        if !(v >= 0.0) {
            return bad(field, "must be a non-negative number");
        }
    }
    if r.load == 0 {
        return bad("load", "must be at least 1");
    }
    if !(r.alpha > 0.0 && r.alpha <= 1.0) {
        return bad("alpha", "must lie in (0, 1]");
    }
    Ok(())
}

/// Parses one record; `line` is used in error messages only.
pub fn parse_record(text: &str, line: usize) -> Result<DropResult, RecordError> {
    let r: DropResult =
        serde_json::from_str(text.trim()).map_err(|e| RecordError::Malformed { line, message: e.to_string() })?;
    check(line, &r)?;
    Ok(r)
}

/// Parses a whole stream, skipping blank lines.
pub fn read_records<R: BufRead>(r: R) -> Result<Vec<DropResult>, RecordError> {
    let mut out = Vec::new();
    for (i, line) in r.lines().enumerate() {
        let line = line.map_err(|e| RecordError::Malformed { line: i + 1, message: e.to_string() })?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(parse_record(&line, i + 1)?);
    }
    Ok(out)
}
