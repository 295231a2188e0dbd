//! Deterministic text output: `%.12e` floats and JSON with sorted keys.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::Value;

/// `x` as C's `%.12e`, e.g. `-1.500000000000e-03`. Non-finite values print as
/// `nan`, `inf` and `-inf`.
pub fn sci(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let s = format!("{x:.12e}");
    let (mantissa, exp) = s.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    format!("{mantissa}e{}{:02}", if exp < 0 { '-' } else { '+' }, exp.abs())
}

/// Pretty-printed JSON with two-space indent. Object keys come out sorted,
/// floats through [`sci`], integers verbatim; non-finite floats are `null`.
pub fn write_json<W: Write + ?Sized>(w: &mut W, value: &Value) -> io::Result<()> {
    write_value(w, value, 0)?;
    writeln!(w)
}

pub fn to_json_string<T: Serialize>(value: &T) -> String {
    let v = serde_json::to_value(value).expect("serializable");
    let mut buf = Vec::new();
    write_json(&mut buf, &v).expect("in-memory write");
    String::from_utf8(buf).expect("utf-8 output")
}

fn indent<W: Write + ?Sized>(w: &mut W, depth: usize) -> io::Result<()> {
    write!(w, "{:1$}", "", 2 * depth)
}

fn write_value<W: Write + ?Sized>(w: &mut W, value: &Value, depth: usize) -> io::Result<()> {
    match value {
        Value::Null => write!(w, "null"),
        Value::Bool(b) => write!(w, "{b}"),
        Value::Number(n) => match (n.as_u64(), n.as_i64()) {
            (Some(u), _) if !n.is_f64() => write!(w, "{u}"),
            (_, Some(i)) if !n.is_f64() => write!(w, "{i}"),
            _ => {
                let x = n.as_f64().unwrap_or(f64::NAN);
                if x.is_finite() {
                    write!(w, "{}", sci(x))
                } else {
                    write!(w, "null")
                }
            }
        },
        Value::String(s) => write!(w, "{}", Value::String(s.clone())),
        Value::Array(items) => {
            if items.is_empty() {
                return write!(w, "[]");
            }
            // numeric arrays stay on one line
            if items.iter().all(|v| v.is_number() || v.is_null()) {
                write!(w, "[")?;
                for (k, v) in items.iter().enumerate() {
                    if k > 0 {
                        write!(w, ", ")?;
                    }
                    write_value(w, v, depth)?;
                }
                return write!(w, "]");
            }
            writeln!(w, "[")?;
            for (k, v) in items.iter().enumerate() {
                indent(w, depth + 1)?;
                write_value(w, v, depth + 1)?;
                writeln!(w, "{}", if k + 1 < items.len() { "," } else { "" })?;
            }
            indent(w, depth)?;
            write!(w, "]")
        }
        Value::Object(map) => {
            if map.is_empty() {
                return write!(w, "{{}}");
            }
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            writeln!(w, "{{")?;
            for (k, key) in keys.iter().enumerate() {
                indent(w, depth + 1)?;
                write!(w, "{}: ", Value::String((*key).clone()))?;
                write_value(w, &map[*key], depth + 1)?;
                writeln!(w, "{}", if k + 1 < keys.len() { "," } else { "" })?;
            }
            indent(w, depth)?;
            write!(w, "}}")
        }
    }
}
