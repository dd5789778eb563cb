use std::fmt::Write;

use clap::ValueEnum;
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

pub fn render(value: &Value, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = wciq::json::to_canonical_string(value).expect("values always serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            text(value, 0, &mut out);
            out
        }
    }
}

const INLINE_WIDTH: usize = 72;

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("-".into()),
        Value::Bool(b) => Some(if *b { "yes".into() } else { "no".into() }),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

// Arrays of scalars and other short values stay on one line as compact JSON.
fn inline(v: &Value) -> Option<String> {
    if let Some(s) = scalar(v) {
        return Some(s);
    }
    let s = serde_json::to_string(v).ok()?;
    let flat = v.as_array().is_some_and(|xs| xs.iter().all(|x| scalar(x).is_some()));
    (flat || s.len() <= INLINE_WIDTH).then_some(s)
}

fn text(v: &Value, depth: usize, out: &mut String) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match inline(x) {
                    Some(s) if !x.is_object() || x.as_object().is_some_and(|m| m.is_empty()) => {
                        let _ = writeln!(out, "{pad}{k}: {s}");
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}:");
                        text(x, depth + 1, out);
                    }
                }
            }
        }
        Value::Array(xs) => {
            for x in xs {
                match inline(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        text(x, depth + 1, out);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn json_output_is_sorted_and_newline_terminated() {
        let v = json!({"b": 1, "a": [1, 2]});
        assert_eq!(render(&v, Format::Json), "{\"a\":[1,2],\"b\":1}\n");
    }

    #[test]
    fn text_output_nests_long_values() {
        let v = json!({"ok": true, "facets": [[0, 1]], "inner": {"x": null}});
        assert_eq!(render(&v, Format::Text), "facets: [[0,1]]\ninner:\n  x: -\nok: yes\n");
    }
}
