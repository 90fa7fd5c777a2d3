//! Stdout rendering for JSON documents and plain tables.

use std::io::Write;

use serde_json::Value;

use crate::commands::{Format, Output};

/// Writes to stdout; a reader closing the pipe early (`| head`) is not an error.
pub fn emit(out: &Output, format: Format) {
    let text = match (out, format) {
        (Output::Text(text), _) => text.clone(),
        (Output::Document(v), Format::Json) => {
            serde_json::to_string_pretty(v).expect("JSON values serialize") + "\n"
        }
        (Output::Records(rows), Format::Json) => {
            rows.iter().map(|r| format!("{r}\n")).collect()
        }
        (Output::Document(v), Format::Table) => table(v),
        (Output::Records(rows), Format::Table) => rows_table(rows),
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush());
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| x.is_u64()) => {
            let parts: Vec<String> = items.iter().map(|x| x.to_string()).collect();
            format!("{{{}}}", parts.join(","))
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(cell).collect();
            format!("[{}]", parts.join(" "))
        }
        Value::Object(map) => {
            let parts: Vec<String> = map.iter().map(|(k, x)| format!("{k}={}", cell(x))).collect();
            parts.join(" ")
        }
        other => other.to_string(),
    }
}

fn is_object_list(v: &Value) -> bool {
    matches!(v, Value::Array(items) if !items.is_empty() && items.iter().all(Value::is_object))
}

fn is_matrix(v: &Value) -> bool {
    matches!(v, Value::Array(items) if !items.is_empty()
        && items.iter().all(|r| matches!(r, Value::Array(c) if c.iter().all(Value::is_number) && !c.iter().all(Value::is_u64))))
}

/// Objects become aligned `key  value` lines; nested lists of objects and
/// numeric matrices follow as indented blocks.
pub fn table(v: &Value) -> String {
    let mut out = String::new();
    match v {
        Value::Object(map) => {
            let width = map.keys().map(|k| k.len()).max().unwrap_or(0);
            let mut blocks = Vec::new();
            for (k, val) in map {
                if is_object_list(val) || is_matrix(val) {
                    blocks.push((k, val));
                } else {
                    out.push_str(&format!("{k:<width$}  {}\n", cell(val)));
                }
            }
            for (k, val) in blocks {
                out.push_str(&format!("{k}:\n"));
                let inner = match val {
                    Value::Array(rows) if is_object_list(val) => rows_table(rows),
                    Value::Array(rows) => rows
                        .iter()
                        .map(|r| {
                            let cells: Vec<String> = r
                                .as_array()
                                .into_iter()
                                .flatten()
                                .map(|x| format!("{:>12.6}", x.as_f64().unwrap_or(f64::NAN)))
                                .collect();
                            cells.join(" ") + "\n"
                        })
                        .collect(),
                    _ => unreachable!(),
                };
                for line in inner.lines() {
                    out.push_str(&format!("  {line}\n"));
                }
            }
        }
        Value::Array(rows) if is_object_list(v) => out.push_str(&rows_table(rows)),
        Value::Array(items) => {
            for item in items {
                out.push_str(&table(item));
                out.push('\n');
            }
        }
        other => out.push_str(&format!("{}\n", cell(other))),
    }
    out
}

/// Column table over the keys of the first record.
pub fn rows_table(rows: &[Value]) -> String {
    let Some(Value::Object(first)) = rows.first() else {
        return String::new();
    };
    let keys: Vec<&String> = first.keys().collect();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| keys.iter().map(|k| cell(&r[k.as_str()])).collect())
        .collect();
    let widths: Vec<usize> = keys
        .iter()
        .enumerate()
        .map(|(c, k)| cells.iter().map(|row| row[c].len()).chain([k.len()]).max().unwrap_or(0))
        .collect();
    let line = |items: Vec<String>| -> String {
        let padded: Vec<String> = items
            .iter()
            .zip(&widths)
            .map(|(s, w)| format!("{s:<w$}"))
            .collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(keys.iter().map(|k| k.to_string()).collect());
    for row in cells {
        out.push_str(&line(row));
    }
    out
}
