//! Canonical report serialization and the terminal summary.

use std::fmt::Write;

use catnet::report::{Report, Status};
use serde_json::{json, Value};

use crate::config::Settings;

pub fn document(report: &Report, settings: &Settings) -> Value {
    let status = if report.passed() { "PASS" } else { "FAIL" };
    json!({
        "suite": report.suite,
        "status": status,
        "environment": {
            "tolerance": settings.tolerance,
            "seed": settings.seed,
            "dense_cap": settings.limits.dense,
            "sparse_cap": settings.limits.sparse,
            "versions": {
                "catnet": catnet::VERSION,
                "catnet-cli": env!("CARGO_PKG_VERSION"),
            },
        },
        "items": serde_json::to_value(&report.items).unwrap_or(Value::Null),
    })
}

/// JSON with sorted keys and floats at 12 significant digits.
pub fn canonical(v: &Value) -> String {
    let mut out = String::new();
    write_value(&mut out, v);
    out
}

fn write_value(out: &mut String, v: &Value) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                let _ = write!(out, "{i}");
            } else if let Some(u) = n.as_u64() {
                let _ = write!(out, "{u}");
            } else {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            }
        }
        Value::String(s) => out.push_str(&serde_json::to_string(s).unwrap_or_default()),
        Value::Array(a) => {
            out.push('[');
            for (i, x) in a.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(out, x);
            }
            out.push(']');
        }
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&serde_json::to_string(k).unwrap_or_default());
                out.push(':');
                write_value(out, &m[k.as_str()]);
            }
            out.push('}');
        }
    }
}

/// Twelve significant digits, trailing zeros trimmed, exponent outside `[1e-4, 1e12)`.
pub fn format_float(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.11e}");
    let (mant, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let e: i32 = exp.parse().unwrap_or(0);
    if (-4..12).contains(&e) {
        let decimals = (11 - e).max(0) as usize;
        let mut s = format!("{x:.decimals$}");
        if s.contains('.') {
            s = s.trim_end_matches('0').trim_end_matches('.').to_string();
        }
        if s == "-0" {
            s = "0".to_string();
        }
        s
    } else {
        let m = if mant.contains('.') { mant.trim_end_matches('0').trim_end_matches('.') } else { mant };
        format!("{m}e{e}")
    }
}

pub fn summary(report: &Report) -> String {
    let mut s = String::new();
    let fails: Vec<_> = report.items.iter().filter(|i| i.status == Status::Fail).collect();
    for item in &fails {
        let r = item.residual.map(format_float).unwrap_or_else(|| "-".to_string());
        let _ = writeln!(s, "FAIL {} residual={r}{}", item.name, item.note.as_ref().map(|n| format!(" ({n})")).unwrap_or_default());
    }
    let skipped = report.items.iter().filter(|i| i.status == Status::Skip).count();
    let verdict = if fails.is_empty() { "PASS" } else { "FAIL" };
    let _ = writeln!(
        s,
        "{verdict} {}: {} items, {} failed, {} skipped, max residual {}",
        report.suite,
        report.items.len(),
        fails.len(),
        skipped,
        format_float(report.max_residual())
    );
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_formatting() {
        assert_eq!(format_float(1.0), "1");
        assert_eq!(format_float(1.618033988749895), "1.61803398875");
        assert_eq!(format_float(1e-9), "1e-9");
        assert_eq!(format_float(2.5e-13), "2.5e-13");
        assert_eq!(format_float(-0.5), "-0.5");
        assert_eq!(format_float(4096.0), "4096");
        assert_eq!(format_float(f64::NAN), "null");
    }

    #[test]
    fn keys_are_sorted() {
        let v = json!({"b": 1, "a": {"d": 0.1, "c": [true, null]}});
        assert_eq!(canonical(&v), r#"{"a":{"c":[true,null],"d":0.1},"b":1}"#);
    }
}
