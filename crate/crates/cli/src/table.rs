//! Plain-text rendering of command output for `--table`.

use std::fmt::Write;

use serde_json::Value;

pub fn render(v: &Value) -> String {
    let mut out = String::new();
    walk(&mut out, None, v, 0);
    out
}

fn is_matrix(v: &Value) -> bool {
    v.get("rows").is_some() && v.get("cols").is_some() && v.get("entries").is_some()
}

fn is_leaf(v: &Value) -> bool {
    match v {
        Value::Array(a) => a.iter().all(|x| !x.is_object() && !x.is_array()) || a.iter().all(is_pair),
        Value::Object(_) => false,
        _ => true,
    }
}

fn is_pair(v: &Value) -> bool {
    matches!(v, Value::Array(a) if a.len() == 2 && a.iter().all(|x| !x.is_object() && !x.is_array()))
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `[re, im]` as `re`, `im i` or `re+im i`.
fn entry(v: &Value) -> String {
    let Some([re, im]) = v.as_array().map(Vec::as_slice) else {
        return scalar(v);
    };
    let (re, im) = (scalar(re), scalar(im));
    let zero = |s: &str| s == "0" || s == "0.0" || s == "-0.0";
    match (zero(&re), zero(&im)) {
        (_, true) => re,
        (true, false) => format!("{im}i"),
        (false, false) if im.starts_with('-') => format!("{re}{im}i"),
        _ => format!("{re}+{im}i"),
    }
}

fn compact(v: &Value) -> String {
    match v {
        Value::Array(a) => format!("[{}]", a.iter().map(compact).collect::<Vec<_>>().join(", ")),
        other => scalar(other),
    }
}

fn walk(out: &mut String, key: Option<&str>, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    let label = key.map(|k| format!("{k}: ")).unwrap_or_default();
    if is_matrix(v) {
        let rows = v["rows"].as_u64().unwrap_or(0) as usize;
        let cols = v["cols"].as_u64().unwrap_or(0) as usize;
        let cells: Vec<String> = v["entries"].as_array().map(|e| e.iter().map(entry).collect()).unwrap_or_default();
        let width = cells.iter().map(|c| c.chars().count()).max().unwrap_or(1);
        let _ = writeln!(out, "{pad}{label}{rows}x{cols}");
        for r in 0..rows {
            let line: Vec<String> = (0..cols)
                .map(|c| format!("{:>width$}", cells.get(r * cols + c).map_or("?", String::as_str)))
                .collect();
            let _ = writeln!(out, "{pad}  {}", line.join("  "));
        }
        return;
    }
    if is_leaf(v) {
        let _ = writeln!(out, "{pad}{label}{}", compact(v));
        return;
    }
    if let Some(k) = key {
        let _ = writeln!(out, "{pad}{k}:");
    }
    let inner = if key.is_some() { depth + 1 } else { depth };
    match v {
        Value::Object(o) => o.iter().for_each(|(k, x)| walk(out, Some(k), x, inner)),
        Value::Array(a) => a
            .iter()
            .enumerate()
            .for_each(|(i, x)| walk(out, Some(&format!("[{i}]")), x, inner)),
        _ => unreachable!("leaves are handled above"),
    }
}
