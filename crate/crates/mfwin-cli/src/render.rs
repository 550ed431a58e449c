//! Text rendering of reports.

use serde_json::Value;

use crate::ops::CheckOut;
use crate::scenario::{Golden, ScenarioReport};

pub fn checks(out: &mut String, checks: &[CheckOut]) {
    for c in checks {
        let mark = if c.ok { "ok" } else { "FAILED" };
        if c.detail.is_empty() {
            out.push_str(&format!("  [{mark}] {}\n", c.name));
        } else {
            out.push_str(&format!("  [{mark}] {} - {}\n", c.name, c.detail));
        }
    }
}

/// Indented `key: value` listing of a JSON value.
pub fn value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                if is_scalar(x) {
                    out.push_str(&format!("{pad}{k}: {}\n", scalar(x)));
                } else {
                    out.push_str(&format!("{pad}{k}:\n"));
                    value(out, x, indent + 2);
                }
            }
        }
        Value::Array(a) if a.iter().all(is_scalar) => {
            out.push_str(&format!("{pad}[{}]\n", a.iter().map(scalar).collect::<Vec<_>>().join(", ")));
        }
        Value::Array(a) => {
            for x in a {
                if is_scalar(x) || x.as_array().is_some_and(|a| a.iter().all(is_scalar)) {
                    out.push_str(&format!("{pad}- {}\n", compact(x)));
                } else {
                    out.push_str(&format!("{pad}-\n"));
                    value(out, x, indent + 2);
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar(v))),
    }
}

fn is_scalar(v: &Value) -> bool {
    !matches!(v, Value::Object(_) | Value::Array(_))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        _ => v.to_string(),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Array(a) => format!("[{}]", a.iter().map(compact).collect::<Vec<_>>().join(", ")),
        _ => scalar(v),
    }
}

/// Operation result: checks followed by the op's own summary or a generic
/// listing of the output.
pub fn body(out: &mut String, cks: &[CheckOut], text: Option<&str>, output: &Value) {
    checks(out, cks);
    match text {
        Some(t) => {
            for line in t.lines() {
                out.push_str(&format!("  {line}\n"));
            }
        }
        None => value(out, output, 2),
    }
}

pub fn scenario(r: &ScenarioReport, detailed: bool) -> String {
    let mut out = format!("{} ({}/{}): {}", r.scenario, r.module, r.operation, r.status.label());
    if let Some(e) = &r.error {
        out.push_str(&format!(" - {e}"));
    }
    out.push('\n');
    if detailed {
        body(&mut out, &r.checks, r.text.as_deref(), &r.output);
        if r.golden != Golden::None {
            out.push_str(&format!("  golden: {}\n", serde_json::to_value(r.golden).expect("serializes").as_str().unwrap_or("")));
        }
    }
    out
}
