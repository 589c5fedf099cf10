//! Canonical report values: a small JSON document model with deterministic
//! serialization. Object keys are sorted, floats carry 17 significant digits,
//! and identical inputs produce byte-identical output.

use std::collections::BTreeMap;

use crate::form::{Form, C};

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Null,
    Bool(bool),
    Int(i64),
    Float(f64),
    Str(String),
    Array(Vec<Value>),
    Object(BTreeMap<String, Value>),
}

impl Value {
    pub fn object() -> Value {
        Value::Object(BTreeMap::new())
    }

    pub fn set(&mut self, key: &str, v: impl Into<Value>) -> &mut Value {
        if let Value::Object(map) = self {
            map.insert(key.to_string(), v.into());
        }
        self
    }

    pub fn push(&mut self, v: impl Into<Value>) -> &mut Value {
        if let Value::Array(items) = self {
            items.push(v.into());
        }
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        match self {
            Value::Object(map) => map.get(key),
            _ => None,
        }
    }

    /// Canonical serialization.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        self.write(&mut out);
        out
    }

    fn write(&self, out: &mut String) {
        match self {
            Value::Null => out.push_str("null"),
            Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Value::Int(i) => out.push_str(&i.to_string()),
            Value::Float(x) => out.push_str(&float_repr(*x)),
            Value::Str(s) => write_string(s, out),
            Value::Array(items) => {
                out.push('[');
                for (i, v) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    v.write(out);
                }
                out.push(']');
            }
            Value::Object(map) => {
                out.push('{');
                for (i, (k, v)) in map.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_string(k, out);
                    out.push(':');
                    v.write(out);
                }
                out.push('}');
            }
        }
    }

    /// Flattens to rows of (path, printed value) for the TSV format.
    pub fn flatten(&self) -> Vec<(String, String)> {
        let mut rows = Vec::new();
        self.flatten_into("", &mut rows);
        rows
    }

    fn flatten_into(&self, path: &str, rows: &mut Vec<(String, String)>) {
        match self {
            Value::Object(map) => {
                for (k, v) in map {
                    let sub = if path.is_empty() { k.clone() } else { format!("{path}.{k}") };
                    v.flatten_into(&sub, rows);
                }
            }
            Value::Array(items) => {
                for (i, v) in items.iter().enumerate() {
                    v.flatten_into(&format!("{path}[{i}]"), rows);
                }
            }
            Value::Null => rows.push((path.to_string(), "null".into())),
            Value::Bool(b) => rows.push((path.to_string(), b.to_string())),
            Value::Int(i) => rows.push((path.to_string(), i.to_string())),
            Value::Float(x) => rows.push((path.to_string(), float_repr(*x))),
            Value::Str(s) => rows.push((path.to_string(), s.clone())),
        }
    }
}

impl From<bool> for Value {
    fn from(b: bool) -> Value {
        Value::Bool(b)
    }
}
impl From<i64> for Value {
    fn from(i: i64) -> Value {
        Value::Int(i)
    }
}
impl From<usize> for Value {
    fn from(i: usize) -> Value {
        Value::Int(i as i64)
    }
}
impl From<f64> for Value {
    fn from(x: f64) -> Value {
        Value::Float(x)
    }
}
impl From<&str> for Value {
    fn from(s: &str) -> Value {
        Value::Str(s.to_string())
    }
}
impl From<String> for Value {
    fn from(s: String) -> Value {
        Value::Str(s)
    }
}
impl From<Vec<Value>> for Value {
    fn from(v: Vec<Value>) -> Value {
        Value::Array(v)
    }
}

/// 17 significant digits, stable across runs. Non-finite values have no JSON
/// representation and are reported as null by the writer above.
pub fn float_repr(x: f64) -> String {
    if !x.is_finite() {
        return "null".to_string();
    }
    let x = if x == 0.0 { 0.0 } else { x }; // normalize −0.0
    format!("{:.16e}", x)
}

fn write_string(s: &str, out: &mut String) {
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
}

/// FNV-1a over the canonical serialization; used for model fingerprints.
pub fn fingerprint(v: &Value) -> String {
    let bytes = v.to_json();
    let mut hash: u64 = 0xcbf29ce484222325;
    for b in bytes.as_bytes() {
        hash ^= *b as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

pub fn complex_value(c: C) -> Value {
    Value::Array(vec![Value::Float(c.re), Value::Float(c.im)])
}

/// Serializes a form as bidegree-tagged coefficient arrays plus a display string.
pub fn form_value(f: &Form) -> Value {
    let mut comps = Value::object();
    for (p, q) in f.bidegrees() {
        let v = f.component(p, q);
        if v.iter().all(|c| c.norm() == 0.0) {
            continue;
        }
        let coeffs: Vec<Value> = v.iter().map(|&c| complex_value(c)).collect();
        comps.set(&format!("({p},{q})"), Value::Array(coeffs));
    }
    let mut out = Value::object();
    out.set("components", comps);
    out.set("display", f.describe(1e-12));
    out
}

pub fn matrix_value(m: &nalgebra::DMatrix<C>) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|r| Value::Array((0..m.ncols()).map(|c| complex_value(m[(r, c)])).collect()))
        .collect();
    Value::Array(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_output_is_sorted_and_stable() {
        let mut v = Value::object();
        v.set("zeta", 1.0_f64);
        v.set("alpha", true);
        v.set("mid", Value::Array(vec![Value::Int(3), Value::Null]));
        let s = v.to_json();
        assert_eq!(s, r#"{"alpha":true,"mid":[3,null],"zeta":1.0000000000000000e0}"#);
        assert_eq!(s, v.to_json());
    }

    #[test]
    fn float_formatting_is_17_digits() {
        assert_eq!(float_repr(1.0), "1.0000000000000000e0");
        assert_eq!(float_repr(-0.0), "0.0000000000000000e0");
        assert_eq!(float_repr(0.1), "1.0000000000000001e-1");
    }

    #[test]
    fn fingerprints_differ() {
        let mut a = Value::object();
        a.set("x", 1.0_f64);
        let mut b = Value::object();
        b.set("x", 2.0_f64);
        assert_ne!(fingerprint(&a), fingerprint(&b));
        assert_eq!(fingerprint(&a), fingerprint(&a));
    }
}
