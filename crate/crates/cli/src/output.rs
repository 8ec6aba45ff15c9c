use std::fmt::Write as _;
use std::io::Write as _;
use std::path::Path;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// Fields identifying a run; identical configs give identical metadata.
#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub schema_version: u32,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble: Option<String>,
    pub n_samples: usize,
    pub seed: u64,
    pub generator: &'static str,
    pub block_size: usize,
    pub stream_rule: &'static str,
}

impl Metadata {
    pub fn new(command: &'static str, ensemble: Option<String>, n_samples: usize, seed: u64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            command,
            ensemble,
            n_samples,
            seed,
            generator: qmeasure_core::samplers::GENERATOR_NAME,
            block_size: qmeasure_core::mc::BLOCK_SIZE,
            stream_rule: "block-index",
        }
    }

    /// `# key=value ...` line heading CSV output.
    pub fn csv_comment(&self) -> String {
        let mut line = format!("# schema_version={} command={}", self.schema_version, self.command);
        if let Some(e) = &self.ensemble {
            write!(line, " ensemble={e}").unwrap();
        }
        write!(
            line,
            " n_samples={} seed={} generator={} block_size={} stream_rule={}",
            self.n_samples, self.seed, self.generator, self.block_size, self.stream_rule
        )
        .unwrap();
        line
    }
}

/// Seventeen significant digits, enough to round-trip any `f64`.
pub fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}

fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, rows);
            }
        }
        Value::Number(n) => rows.push((prefix.to_string(), n.as_f64().filter(|_| n.is_f64()).map(float).unwrap_or(n.to_string()))),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

/// Two-column `key,value` CSV of a report, nested keys joined by `.`.
pub fn key_value_csv<T: Serialize>(comment: &str, value: &T) -> String {
    let mut rows = Vec::new();
    flatten("", &serde_json::to_value(value).expect("serializable output"), &mut rows);
    let mut out = format!("{comment}\nkey,value\n");
    for (k, v) in rows {
        writeln!(out, "{k},{v}").unwrap();
    }
    out
}

/// Writes to `path`, or stdout when absent.
pub fn emit(path: Option<&Path>, content: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, content).map_err(|source| CliError::Io { path: p.to_path_buf(), source }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io { path: "<stdout>".into(), source })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_round_trip() {
        for x in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, 0.0] {
            assert_eq!(float(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn flattening() {
        let v = serde_json::json!({"a": 1, "b": {"c": 0.5, "d": true}, "e": null});
        assert_eq!(key_value_csv("# x", &v), "# x\nkey,value\na,1\nb.c,5.0000000000000000e-1\nb.d,true\ne,\n");
    }
}
