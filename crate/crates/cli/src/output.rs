//! Deterministic output: CSV data files and JSON reports.
//!
//! JSON objects serialize with lexicographically sorted keys (the map
//! behind `serde_json::Value` is ordered); floats print in shortest
//! round-trip form. Timestamps appear only in report envelopes, never in
//! data files.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::CliError;

/// The exact CSV header, one entry per column.
pub const CSV_COLUMNS: [&str; 11] = [
    "x",
    "Re V\u{207a}",
    "Im V\u{207a}",
    "Re \u{3c8}\u{2080}",
    "Im \u{3c8}\u{2080}",
    "Re \u{3c8}\u{2081}",
    "Im \u{3c8}\u{2081}",
    "Re W",
    "Im W",
    "Re W\u{2081}",
    "Im W\u{2081}",
];

/// ASCII column identifiers for the JSON data format, same order.
pub const JSON_COLUMNS: [&str; 11] = [
    "x",
    "re_v_plus",
    "im_v_plus",
    "re_psi0",
    "im_psi0",
    "re_psi1",
    "im_psi1",
    "re_w",
    "im_w",
    "re_w1",
    "im_w1",
];

pub fn write_csv(path: &Path, rows: &[[f64; 11]]) -> Result<(), CliError> {
    let mut buf = String::new();
    buf.push_str(&CSV_COLUMNS.join(","));
    buf.push('\n');
    for row in rows {
        let mut first = true;
        for v in row {
            if !first {
                buf.push(',');
            }
            first = false;
            buf.push_str(&format_float(*v));
        }
        buf.push('\n');
    }
    std::fs::write(path, buf)
        .map_err(|e| CliError::numerical(format!("cannot write {path:?}: {e}")))
}

/// Shortest round-trip form, switching to scientific notation outside
/// `[1e-4, 1e17)` the way `%g` does.
pub fn format_float(v: f64) -> String {
    let mag = v.abs();
    if mag != 0.0 && !(1e-4..1e17).contains(&mag) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

pub fn columns_as_json(rows: &[[f64; 11]]) -> Value {
    let mut obj = serde_json::Map::new();
    for (k, name) in JSON_COLUMNS.iter().enumerate() {
        let col: Vec<Value> = rows.iter().map(|r| json!(r[k])).collect();
        obj.insert((*name).to_owned(), Value::Array(col));
    }
    Value::Object(obj)
}

/// Report envelope metadata: config echo, crate version, timestamp.
pub fn provenance(config_echo: Value) -> Value {
    json!({
        "config": config_echo,
        "timestamp": chrono::Utc::now().to_rfc3339(),
        "version": env!("CARGO_PKG_VERSION"),
    })
}

/// Write a JSON document to `out`, or pretty-print it to stdout.
pub fn emit_json(out: Option<&Path>, doc: &Value) -> Result<(), CliError> {
    let text = format!(
        "{}\n",
        serde_json::to_string_pretty(doc).expect("valid json")
    );
    match out {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::numerical(format!("cannot write {path:?}: {e}"))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::numerical(format!("cannot write to stdout: {e}")))
        }
    }
}

/// One verification check line in a report.
pub fn check_entry(name: &str, measured: Value, tolerance: Value, pass: bool) -> Value {
    json!({
        "measured": measured,
        "name": name,
        "pass": pass,
        "tolerance": tolerance,
    })
}
