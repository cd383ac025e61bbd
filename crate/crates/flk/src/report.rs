//! Deterministic reports: a fixed-width text rendering and a stable JSON
//! tree. Identical inputs produce byte-identical output; there are no
//! timestamps and every map is key-sorted.

use serde::Serialize;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Pass,
    Fail,
    Ambiguous,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Ambiguous => "ambiguous",
        })
    }
}

/// A complete command report.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub diagnostics: Vec<String>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value) -> Self {
        Report {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            inputs,
            results,
            diagnostics: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    /// Stable JSON tree with the top-level keys
    /// `{version, command, inputs, results, diagnostics, verdict}`.
    /// serde_json maps are BTree-backed, so key order is deterministic.
    pub fn to_json_string(&self) -> String {
        let v = json!({
            "version": self.tool_version,
            "command": self.command,
            "inputs": self.inputs,
            "results": self.results,
            "diagnostics": self.diagnostics,
            "verdict": self.verdict.to_string(),
        });
        let mut s = serde_json::to_string_pretty(&v).expect("report serialization");
        s.push('\n');
        s
    }

    /// Fixed-width text rendering.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "flk {} :: {}\n",
            self.tool_version, self.command
        ));
        render_value(&mut out, "inputs", &self.inputs, 0);
        render_value(&mut out, "results", &self.results, 0);
        if !self.diagnostics.is_empty() {
            out.push_str("diagnostics:\n");
            for d in &self.diagnostics {
                out.push_str(&format!("  ! {d}\n"));
            }
        }
        out.push_str(&format!("verdict: {}\n", self.verdict));
        out
    }
}

fn is_matrix(v: &Value) -> bool {
    v.as_array()
        .map(|rows| {
            !rows.is_empty()
                && rows.iter().all(|r| {
                    r.as_array()
                        .map(|cells| cells.iter().all(Value::is_number))
                        .unwrap_or(false)
                })
        })
        .unwrap_or(false)
}

fn render_matrix(out: &mut String, v: &Value, indent: usize) {
    let rows = v.as_array().unwrap();
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            r.as_array()
                .unwrap()
                .iter()
                .map(|c| c.to_string())
                .collect()
        })
        .collect();
    let width = cells
        .iter()
        .flat_map(|r| r.iter().map(|c| c.len()))
        .max()
        .unwrap_or(1);
    for row in cells {
        out.push_str(&" ".repeat(indent));
        out.push_str("[ ");
        let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        out.push_str(&padded.join(" "));
        out.push_str(" ]\n");
    }
}

fn render_value(out: &mut String, key: &str, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(map) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, val) in map {
                render_value(out, k, val, indent + 2);
            }
        }
        Value::Array(items) if is_matrix(v) && items.len() > 1 => {
            out.push_str(&format!("{pad}{key}:\n"));
            render_matrix(out, v, indent + 2);
        }
        Value::Array(items) => {
            if items.is_empty() {
                out.push_str(&format!("{pad}{key}: []\n"));
            } else if items.iter().all(|i| !i.is_object() && !i.is_array()) {
                let rendered: Vec<String> = items
                    .iter()
                    .map(|i| match i {
                        Value::String(s) => s.clone(),
                        other => other.to_string(),
                    })
                    .collect();
                out.push_str(&format!("{pad}{key}: {}\n", rendered.join(" ")));
            } else {
                out.push_str(&format!("{pad}{key}:\n"));
                for (idx, item) in items.iter().enumerate() {
                    render_value(out, &format!("[{idx}]"), item, indent + 2);
                }
            }
        }
        Value::String(s) => out.push_str(&format!("{pad}{key}: {s}\n")),
        other => out.push_str(&format!("{pad}{key}: {other}\n")),
    }
}

/// Serialize any `Serialize` payload into a `Value` for embedding.
pub fn to_value<T: Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("value serialization")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_are_byte_identical() {
        let mk = || {
            let mut r = Report::new(
                "demo",
                json!({"type": "B3~1", "t": 4}),
                json!({"matrix": [[2, -1], [-1, 2]], "list": [1, 2, 3]}),
            );
            r.diagnostics.push("note".into());
            r
        };
        let a = mk();
        let b = mk();
        assert_eq!(a.to_json_string(), b.to_json_string());
        assert_eq!(a.to_text(), b.to_text());
        assert!(a.to_json_string().contains("\"verdict\""));
    }

    #[test]
    fn text_renders_matrices_aligned() {
        let r = Report::new("demo", json!({}), json!({"m": [[2, -11], [-1, 2]]}));
        let t = r.to_text();
        assert!(t.contains("[ "), "{t}");
        assert!(t.ends_with("verdict: pass\n"));
    }
}
