//! Indented plain-text rendering of a report.

use serde_json::Value;

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::Bool(b) => if *b { "yes" } else { "no" }.into(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{x:.6e}"),
            _ => n.to_string(),
        },
        Value::String(s) => s.clone(),
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar).collect();
            format!("[{}]", parts.join(", "))
        }
        Value::Object(_) => unreachable!(),
    }
}

fn flat(v: &Value) -> bool {
    match v {
        Value::Object(m) => m.is_empty(),
        Value::Array(items) => items.iter().all(|x| match x {
            Value::Array(p) => p.iter().all(|y| !y.is_object() && !y.is_array()),
            other => !other.is_object() && !other.is_array(),
        }),
        _ => true,
    }
}

fn walk(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(m) if !m.is_empty() => {
            if !key.is_empty() {
                out.push_str(&format!("{pad}{key}:\n"));
            }
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let inner = if key.is_empty() { depth } else { depth + 1 };
            for k in keys {
                walk(out, k, &m[k], inner);
            }
        }
        Value::Array(items) if !flat(v) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                walk(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        Value::Object(_) => out.push_str(&format!("{pad}{key}: {{}}\n")),
        _ => out.push_str(&format!("{pad}{key}: {}\n", scalar(v))),
    }
}

pub fn render(report: &Value) -> String {
    let mut out = String::new();
    walk(&mut out, "", report, 0);
    out
}
