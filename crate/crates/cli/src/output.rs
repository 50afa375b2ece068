//! Rendering an [`Outcome`] as text, JSON or CSV.

use std::io::Write;

use serde_json::Value;

use crate::commands::Outcome;
use crate::config::Format;
use crate::error::{CliError, Result};

pub fn render(outcome: &Outcome, format: Format, out: &mut dyn Write) -> Result<()> {
    match format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut *out, &outcome.value)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let table = outcome
                .table
                .as_ref()
                .ok_or_else(|| CliError::Usage("this command has no CSV form; use --format json".into()))?;
            let mut w = csv::WriterBuilder::new().flexible(true).from_writer(out);
            for row in table {
                w.write_record(row)?;
            }
            w.flush()?;
        }
        Format::Text => write_text(&outcome.value, "", out)?,
    }
    Ok(())
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(if s.is_empty() { "\"\"".into() } else { s.clone() }),
        Value::Array(items) if items.is_empty() => Some("[]".into()),
        Value::Array(items) => items
            .iter()
            .map(scalar_text)
            .collect::<Option<Vec<_>>>()
            .map(|parts| parts.join(" ")),
        Value::Object(_) => None,
    }
}

/// `key: value` lines, nested objects indented; `{expected, actual, match}`
/// triples collapse onto one line.
fn write_text(v: &Value, indent: &str, out: &mut dyn Write) -> Result<()> {
    match v {
        Value::Object(map) => {
            for (k, val) in map {
                if let (Some(e), Some(a), Some(m)) = (val.get("expected"), val.get("actual"), val.get("match")) {
                    writeln!(
                        out,
                        "{indent}{k}: {} (expected {}){}",
                        scalar_text(a).unwrap_or_default(),
                        scalar_text(e).unwrap_or_default(),
                        if m == true { "" } else { "  MISMATCH" }
                    )?;
                } else if let Some(s) = scalar_text(val).filter(|_| !matches!(val, Value::Array(a) if a.iter().any(|x| x.is_array() || x.is_object()))) {
                    writeln!(out, "{indent}{k}: {s}")?;
                } else {
                    writeln!(out, "{indent}{k}:")?;
                    write_text(val, &format!("{indent}  "), out)?;
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match scalar_text(item) {
                    Some(s) => writeln!(out, "{indent}{s}")?,
                    None => {
                        writeln!(out, "{indent}-")?;
                        write_text(item, &format!("{indent}  "), out)?;
                    }
                }
            }
        }
        other => writeln!(out, "{indent}{}", scalar_text(other).unwrap_or_default())?,
    }
    Ok(())
}
