//! Run manifests and artifact serialization.
//!
//! Floats are written with 17 significant digits so every value reads back to
//! the same `f64`. Non-finite floats become `null` in JSON.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Everything needed to rerun a command, plus timing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub command_line: Vec<String>,
    pub config: Value,
    pub seed: Option<u64>,
    /// Operation name to number of invocations.
    pub operations: BTreeMap<String, u64>,
    /// Timestamp field, excluded from reproducibility comparisons.
    pub started_unix_seconds: u64,
    /// Timestamp field, excluded from reproducibility comparisons.
    pub wall_time_seconds: f64,
}

impl RunManifest {
    pub fn new(command: &str, command_line: Vec<String>, config: Value, seed: Option<u64>) -> Self {
        RunManifest {
            tool: "idemnorm".into(),
            tool_version: TOOL_VERSION.into(),
            command: command.into(),
            command_line,
            config,
            seed,
            operations: BTreeMap::new(),
            started_unix_seconds: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
            wall_time_seconds: 0.0,
        }
    }

    pub fn count(&mut self, op: &str, n: u64) {
        *self.operations.entry(op.to_string()).or_insert(0) += n;
    }
}

/// Names of the fields that vary between otherwise identical runs.
pub const TIMESTAMP_FIELDS: [&str; 2] = ["started_unix_seconds", "wall_time_seconds"];

/// `%.17g`-style formatting: fixed notation for moderate exponents, scientific otherwise.
pub fn format_f64(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0.0".into() } else { "0.0".into() };
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    if (-5..16).contains(&exp) {
        let decimals = (16 - exp).max(1) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{mantissa}e{exp}")
    }
}

/// Pretty JSON with [`format_f64`] floats.
pub fn to_json_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_value(&mut out, &v, 0);
    out.push('\n');
    Ok(out)
}

fn write_value(out: &mut String, v: &Value, depth: usize) {
    let pad = |out: &mut String, d: usize| out.extend(std::iter::repeat_n("  ", d));
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => match (n.as_u64(), n.as_i64(), n.as_f64()) {
            (Some(u), _, _) => write!(out, "{u}").unwrap(),
            (None, Some(i), _) => write!(out, "{i}").unwrap(),
            (_, _, Some(f)) if f.is_finite() => out.push_str(&format_f64(f)),
            _ => out.push_str("null"),
        },
        Value::String(s) => out.push_str(&serde_json::to_string(s).expect("string")),
        Value::Array(items) if items.is_empty() => out.push_str("[]"),
        Value::Array(items) if items.iter().all(|i| !i.is_array() && !i.is_object()) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_value(out, item, depth);
            }
            out.push(']');
        }
        Value::Array(items) => {
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                pad(out, depth + 1);
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push(']');
        }
        Value::Object(map) if map.is_empty() => out.push_str("{}"),
        Value::Object(map) => {
            out.push_str("{\n");
            for (i, (k, item)) in map.iter().enumerate() {
                pad(out, depth + 1);
                out.push_str(&serde_json::to_string(k).expect("key"));
                out.push_str(": ");
                write_value(out, item, depth + 1);
                out.push_str(if i + 1 < map.len() { ",\n" } else { "\n" });
            }
            pad(out, depth);
            out.push('}');
        }
    }
}

/// A JSON artifact: the manifest followed by the command's result.
#[derive(Debug, Serialize)]
pub struct Artifact<'a, T: Serialize> {
    pub manifest: &'a RunManifest,
    pub result: &'a T,
}

/// CSV with a `# manifest:` comment line carrying the manifest as compact JSON.
pub fn to_csv(manifest: &RunManifest, header: &[&str], rows: &[Vec<CsvCell>]) -> serde_json::Result<String> {
    let mut out = format!("# manifest: {}\n", serde_json::to_string(manifest)?);
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        let cells: Vec<String> = row.iter().map(CsvCell::render).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum CsvCell {
    Int(i64),
    Float(f64),
    Text(String),
}

impl CsvCell {
    fn render(&self) -> String {
        match self {
            CsvCell::Int(i) => i.to_string(),
            CsvCell::Float(f) => format_f64(*f),
            CsvCell::Text(s) if s.contains([',', '"', '\n']) => format!("\"{}\"", s.replace('"', "\"\"")),
            CsvCell::Text(s) => s.clone(),
        }
    }
}

/// Where an artifact goes: a file, or `<dir>/<command>.<ext>` when `out` is a directory.
pub fn resolve_output(out: &Path, command: &str, ext: &str) -> PathBuf {
    let is_dir = out.is_dir() || out.as_os_str().to_string_lossy().ends_with(std::path::MAIN_SEPARATOR);
    if is_dir {
        out.join(format!("{command}.{ext}"))
    } else {
        out.to_path_buf()
    }
}

/// Drops the timestamp fields so two artifacts can be compared for reproducibility.
pub fn strip_timestamps(mut artifact: Value) -> Value {
    if let Some(m) = artifact.get_mut("manifest").and_then(Value::as_object_mut) {
        for f in TIMESTAMP_FIELDS {
            m.remove(f);
        }
    }
    artifact
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [1.0, 0.1, 1.0 / 3.0, 2.0f64.sqrt() * 1e10, 6.02e23, 1.5e-7, -4.25, 123456789.125] {
            let s = format_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits = s.trim_start_matches('-').split('e').next().unwrap().replace('.', "");
            assert_eq!(digits.trim_start_matches('0').len(), 17, "{s}");
        }
        assert_eq!(format_f64(1.0), "1.0000000000000000");
        assert_eq!(format_f64(0.0), "0.0");
    }

    #[test]
    fn json_is_valid_and_exact() {
        let v = serde_json::json!({"value": 1.0, "xs": [0.1, 2.5e-9], "n": 3, "nested": [{"a": null}], "s": "q\"x"});
        let text = to_json_string(&v).unwrap();
        let back: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(back, v);
        assert!(text.contains("\"value\": 1.0000000000000000"));
    }

    #[test]
    fn csv_layout() {
        let m = RunManifest::new("dirichlet", vec!["dirichlet".into()], Value::Null, None);
        let text = to_csv(&m, &["k", "norm"], &[vec![CsvCell::Int(0), CsvCell::Float(1.0)]]).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[0].starts_with("# manifest: {"));
        assert_eq!(lines[1], "k,norm");
        assert_eq!(lines[2], "0,1.0000000000000000");
        assert_eq!(CsvCell::Text("a,b".into()).render(), "\"a,b\"");
    }

    #[test]
    fn output_resolution() {
        let dir = std::env::temp_dir();
        assert_eq!(resolve_output(&dir, "norm", "json"), dir.join("norm.json"));
        assert_eq!(resolve_output(Path::new("x/result.json"), "norm", "json"), PathBuf::from("x/result.json"));
    }
}
