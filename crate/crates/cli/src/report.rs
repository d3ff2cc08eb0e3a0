//! Conversion of results to JSON values and the two output formats.

use std::fmt::Write as _;

use gna_core::classify::{classify, AsymptoticReport, ClassifierConfig};
use gna_core::linalg::{GenMatrix, GenVector};
use gna_core::scalar::{GenScalar, ScalarKind};
use serde_json::{json, Value};

use crate::args::OutputFormat;

pub fn report(r: &AsymptoticReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

/// Samples as plain numbers, or `[re, im]` pairs for complex nets.
pub fn samples(a: &GenScalar) -> Value {
    match a.kind() {
        ScalarKind::Real => json!(a.to_f64()),
        ScalarKind::Complex => Value::Array(a.to_f64_pairs().into_iter().map(|(re, im)| json!([re, im])).collect()),
    }
}

/// A net with its classification.
pub fn net(a: &GenScalar, cfg: &ClassifierConfig) -> Value {
    json!({ "samples": samples(a), "report": report(&classify(a, cfg)) })
}

pub fn vector(v: &GenVector) -> Value {
    Value::Array((0..v.len()).map(|i| samples(&v.entry(i))).collect())
}

pub fn vectors(vs: &[GenVector]) -> Value {
    Value::Array(vs.iter().map(vector).collect())
}

/// Row-major table of sample arrays.
pub fn matrix(m: &GenMatrix) -> Value {
    let rows = (0..m.rows()).map(|i| Value::Array((0..m.cols()).map(|j| samples(&m.entry(i, j))).collect()));
    json!({ "rows": m.rows(), "cols": m.cols(), "entries": Value::Array(rows.collect()) })
}

pub fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Pretty => {
            let mut s = String::new();
            pretty(v, 0, &mut s);
            s
        }
    }
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && (!x.is_array() || is_leaf(x))),
        Value::Object(_) => false,
        _ => true,
    }
}

fn leaf(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(a) => format!("[{}]", a.iter().map(leaf).collect::<Vec<_>>().join(", ")),
        other => other.to_string(),
    }
}

fn pretty(v: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                if is_leaf(x) {
                    let _ = writeln!(out, "{pad}{k}: {}", leaf(x));
                } else {
                    let _ = writeln!(out, "{pad}{k}:");
                    pretty(x, indent + 1, out);
                }
            }
        }
        Value::Array(a) if !is_leaf(v) => {
            for (i, x) in a.iter().enumerate() {
                if is_leaf(x) {
                    let _ = writeln!(out, "{pad}- [{i}] {}", leaf(x));
                } else {
                    let _ = writeln!(out, "{pad}- [{i}]");
                    pretty(x, indent + 1, out);
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", leaf(other));
        }
    }
}
