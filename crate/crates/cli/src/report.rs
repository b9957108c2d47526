//! Report envelope and its JSON, TSV and text renderings.

use std::fmt::Write as _;

use serde_json::{json, Value};

pub struct Report {
    pub config: Value,
    pub results: Value,
    pub warnings: Vec<String>,
    pub seed: u64,
    /// Rows for the TSV rendering, header first.
    pub table: Option<Vec<Vec<String>>>,
}

impl Report {
    pub fn to_json(&self) -> Value {
        json!({
            "config": self.config,
            "results": self.results,
            "warnings": self.warnings,
            "version": env!("CARGO_PKG_VERSION"),
            "seed": self.seed,
        })
    }

    pub fn render_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn render_tsv(&self) -> Option<String> {
        let rows = self.table.as_ref()?;
        let mut s = String::new();
        for r in rows {
            s.push_str(&r.join("\t"));
            s.push('\n');
        }
        Some(s)
    }

    pub fn render_text(&self) -> String {
        let mut s = String::new();
        text_value(&mut s, "results", &self.results, 0);
        for w in &self.warnings {
            writeln!(s, "warning: {w}").unwrap();
        }
        s
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(t) => Some(t.clone()),
        Value::Array(a) if a.iter().all(|x| !x.is_object() && !x.is_array()) => {
            Some(format!("[{}]", a.iter().map(|x| scalar(x).unwrap()).collect::<Vec<_>>().join(", ")))
        }
        _ => None,
    }
}

fn text_value(s: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    if let Some(t) = scalar(v) {
        writeln!(s, "{pad}{key}: {t}").unwrap();
        return;
    }
    writeln!(s, "{pad}{key}:").unwrap();
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                text_value(s, k, x, depth + 1);
            }
        }
        Value::Array(a) => {
            for (i, x) in a.iter().enumerate() {
                text_value(s, &format!("[{i}]"), x, depth + 1);
            }
        }
        _ => unreachable!(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_rendering() {
        let r = Report {
            config: json!({}),
            results: json!({"a": [1, 2], "b": {"c": null}, "d": [{"e": true}]}),
            warnings: vec!["w".into()],
            seed: 0,
            table: None,
        };
        assert_eq!(r.render_text(), "results:\n  a: [1, 2]\n  b:\n    c: -\n  d:\n    [0]:\n      e: true\nwarning: w\n");
        assert!(r.render_tsv().is_none());
    }
}
