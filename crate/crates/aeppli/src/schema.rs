//! The JSON document schema for presentations: parsing with JSON-pointer
//! error paths and canonical serialization with a round-trip guarantee.
//!
//! Structure constants are sparse triples `[k, i, j, value]` with 1-based
//! indices; the complex structure is either an explicit (1,0)-coframe or a
//! matrix J; metric, trivializing form and family data are optional.

use nalgebra::DMatrix;
use serde_json::Value as J;

use crate::error::{Error, Result};
use crate::form::C;
use crate::model::{ComplexStructure, LieAlgebraPresentation};
use crate::report::{complex_value, Value};

pub const SCHEMA_VERSION: i64 = 1;

/// Everything a model document can carry.
#[derive(Clone, Debug)]
pub struct ModelDocument {
    pub presentation: LieAlgebraPresentation,
    pub metric: Option<DMatrix<C>>,
    pub u_scale: Option<C>,
    pub family: Option<(String, (f64, f64), f64)>,
}

fn err(pointer: &str, message: impl Into<String>) -> Error {
    Error::SchemaError { pointer: pointer.to_string(), message: message.into() }
}

fn as_object<'a>(v: &'a J, ptr: &str) -> Result<&'a serde_json::Map<String, J>> {
    v.as_object().ok_or_else(|| err(ptr, "expected an object"))
}

fn as_array<'a>(v: &'a J, ptr: &str) -> Result<&'a Vec<J>> {
    v.as_array().ok_or_else(|| err(ptr, "expected an array"))
}

fn as_f64(v: &J, ptr: &str) -> Result<f64> {
    v.as_f64().ok_or_else(|| err(ptr, "expected a number"))
}

fn as_usize(v: &J, ptr: &str) -> Result<usize> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| err(ptr, "expected a nonnegative integer"))
}

fn complex_at(v: &J, ptr: &str) -> Result<C> {
    let pair = as_array(v, ptr)?;
    if pair.len() != 2 {
        return Err(err(ptr, "expected [re, im]"));
    }
    Ok(C::new(as_f64(&pair[0], &format!("{ptr}/0"))?, as_f64(&pair[1], &format!("{ptr}/1"))?))
}

/// Parses a model document from JSON text.
pub fn parse_model(text: &str) -> Result<ModelDocument> {
    let root: J = serde_json::from_str(text).map_err(|e| err("", format!("invalid JSON: {e}")))?;
    let obj = as_object(&root, "")?;

    if let Some(v) = obj.get("schema_version") {
        let version = v.as_i64().ok_or_else(|| err("/schema_version", "expected an integer"))?;
        if version != SCHEMA_VERSION {
            return Err(err("/schema_version", format!("unsupported version {version}")));
        }
    }

    let name = obj
        .get("name")
        .and_then(|v| v.as_str())
        .ok_or_else(|| err("/name", "expected a string"))?
        .to_string();

    let dim_real = as_usize(
        obj.get("dim_real").ok_or_else(|| err("/dim_real", "missing"))?,
        "/dim_real",
    )?;
    if dim_real == 0 || dim_real % 2 != 0 {
        return Err(Error::DimensionOdd(dim_real));
    }
    let n = dim_real / 2;

    let mut structure = Vec::new();
    if let Some(sc) = obj.get("structure_constants") {
        for (row_idx, row) in as_array(sc, "/structure_constants")?.iter().enumerate() {
            let ptr = format!("/structure_constants/{row_idx}");
            let quad = as_array(row, &ptr)?;
            if quad.len() != 4 {
                return Err(err(&ptr, "expected [k, i, j, value]"));
            }
            let k = as_usize(&quad[0], &format!("{ptr}/0"))?;
            let i = as_usize(&quad[1], &format!("{ptr}/1"))?;
            let j = as_usize(&quad[2], &format!("{ptr}/2"))?;
            let c = as_f64(&quad[3], &format!("{ptr}/3"))?;
            if k == 0 || i == 0 || j == 0 || k > dim_real || i > dim_real || j > dim_real {
                return Err(err(&ptr, format!("indices are 1-based and at most {dim_real}")));
            }
            structure.push((k - 1, i - 1, j - 1, c));
        }
    }

    let cs = obj
        .get("complex_structure")
        .ok_or_else(|| err("/complex_structure", "missing"))?;
    let cs_obj = as_object(cs, "/complex_structure")?;
    let cs_type = cs_obj
        .get("type")
        .and_then(|v| v.as_str())
        .ok_or_else(|| err("/complex_structure/type", "expected \"coframe\" or \"J\""))?;
    let complex_structure = match cs_type {
        "coframe" => {
            let rows = as_array(
                cs_obj.get("rows").ok_or_else(|| err("/complex_structure/rows", "missing"))?,
                "/complex_structure/rows",
            )?;
            if rows.len() != n {
                return Err(err("/complex_structure/rows", format!("expected {n} rows")));
            }
            let mut m = DMatrix::<C>::zeros(n, dim_real);
            for (a, row) in rows.iter().enumerate() {
                let ptr = format!("/complex_structure/rows/{a}");
                let entries = as_array(row, &ptr)?;
                if entries.len() != dim_real {
                    return Err(err(&ptr, format!("expected {dim_real} entries")));
                }
                for (j, e) in entries.iter().enumerate() {
                    m[(a, j)] = complex_at(e, &format!("{ptr}/{j}"))?;
                }
            }
            ComplexStructure::Coframe(m)
        }
        "J" => {
            let rows = as_array(
                cs_obj.get("matrix").ok_or_else(|| err("/complex_structure/matrix", "missing"))?,
                "/complex_structure/matrix",
            )?;
            if rows.len() != dim_real {
                return Err(err("/complex_structure/matrix", format!("expected {dim_real} rows")));
            }
            let mut m = DMatrix::<f64>::zeros(dim_real, dim_real);
            for (a, row) in rows.iter().enumerate() {
                let ptr = format!("/complex_structure/matrix/{a}");
                let entries = as_array(row, &ptr)?;
                if entries.len() != dim_real {
                    return Err(err(&ptr, format!("expected {dim_real} entries")));
                }
                for (j, e) in entries.iter().enumerate() {
                    m[(a, j)] = as_f64(e, &format!("{ptr}/{j}"))?;
                }
            }
            ComplexStructure::J(m)
        }
        other => {
            return Err(err("/complex_structure/type", format!("unknown type `{other}`")));
        }
    };

    let presentation = LieAlgebraPresentation { name, dim_real, structure, complex_structure };
    // surfaces RaggedConstants for inconsistent antisymmetry
    presentation.normalized_constants()?;

    let metric = match obj.get("metric") {
        Some(mv) => {
            let m_obj = as_object(mv, "/metric")?;
            let rows = as_array(
                m_obj
                    .get("hermitian_matrix")
                    .ok_or_else(|| err("/metric/hermitian_matrix", "missing"))?,
                "/metric/hermitian_matrix",
            )?;
            if rows.len() != n {
                return Err(err("/metric/hermitian_matrix", format!("expected {n} rows")));
            }
            let mut h = DMatrix::<C>::zeros(n, n);
            for (a, row) in rows.iter().enumerate() {
                let ptr = format!("/metric/hermitian_matrix/{a}");
                let entries = as_array(row, &ptr)?;
                if entries.len() != n {
                    return Err(err(&ptr, format!("expected {n} entries")));
                }
                for (j, e) in entries.iter().enumerate() {
                    h[(a, j)] = complex_at(e, &format!("{ptr}/{j}"))?;
                }
            }
            Some(h)
        }
        None => None,
    };

    let u_scale = match obj.get("trivializing_u") {
        Some(uv) => {
            let u_obj = as_object(uv, "/trivializing_u")?;
            let scale = u_obj
                .get("scale")
                .ok_or_else(|| err("/trivializing_u/scale", "missing"))?;
            Some(complex_at(scale, "/trivializing_u/scale")?)
        }
        None => None,
    };

    let family = match obj.get("family") {
        Some(fv) => {
            let f_obj = as_object(fv, "/family")?;
            let parameter = f_obj
                .get("parameter")
                .and_then(|v| v.as_str())
                .ok_or_else(|| err("/family/parameter", "expected a string"))?
                .to_string();
            let range = as_array(
                f_obj.get("range").ok_or_else(|| err("/family/range", "missing"))?,
                "/family/range",
            )?;
            if range.len() != 2 {
                return Err(err("/family/range", "expected [lo, hi]"));
            }
            let lo = as_f64(&range[0], "/family/range/0")?;
            let hi = as_f64(&range[1], "/family/range/1")?;
            let value = f_obj
                .get("value")
                .map(|v| as_f64(v, "/family/value"))
                .transpose()?
                .unwrap_or((lo + hi) / 2.0);
            Some((parameter, (lo, hi), value))
        }
        None => None,
    };

    Ok(ModelDocument { presentation, metric, u_scale, family })
}

/// Canonical serialization of a document; `parse_model` round-trips through it.
pub fn serialize_document(doc: &ModelDocument) -> Value {
    let mut out = Value::object();
    out.set("schema_version", SCHEMA_VERSION);
    out.set("name", doc.presentation.name.clone());
    out.set("dim_real", doc.presentation.dim_real);

    let normalized = doc
        .presentation
        .normalized_constants()
        .expect("serializing a validated presentation");
    let mut triples = Vec::new();
    for ((k, i, j), c) in normalized {
        if c != 0.0 {
            triples.push(Value::Array(vec![
                Value::Int((k + 1) as i64),
                Value::Int((i + 1) as i64),
                Value::Int((j + 1) as i64),
                Value::Float(c),
            ]));
        }
    }
    out.set("structure_constants", Value::Array(triples));

    let mut cs = Value::object();
    match &doc.presentation.complex_structure {
        ComplexStructure::Coframe(m) => {
            cs.set("type", "coframe");
            let rows: Vec<Value> = (0..m.nrows())
                .map(|a| Value::Array((0..m.ncols()).map(|j| complex_value(m[(a, j)])).collect()))
                .collect();
            cs.set("rows", Value::Array(rows));
        }
        ComplexStructure::J(m) => {
            cs.set("type", "J");
            let rows: Vec<Value> = (0..m.nrows())
                .map(|a| Value::Array((0..m.ncols()).map(|j| Value::Float(m[(a, j)])).collect()))
                .collect();
            cs.set("matrix", Value::Array(rows));
        }
    }
    out.set("complex_structure", cs);

    if let Some(h) = &doc.metric {
        let mut mv = Value::object();
        let rows: Vec<Value> = (0..h.nrows())
            .map(|a| Value::Array((0..h.ncols()).map(|j| complex_value(h[(a, j)])).collect()))
            .collect();
        mv.set("hermitian_matrix", Value::Array(rows));
        out.set("metric", mv);
    }
    if let Some(s) = doc.u_scale {
        let mut uv = Value::object();
        uv.set("scale", complex_value(s));
        out.set("trivializing_u", uv);
    }
    if let Some((param, (lo, hi), value)) = &doc.family {
        let mut fv = Value::object();
        fv.set("parameter", param.clone());
        fv.set("range", Value::Array(vec![Value::Float(*lo), Value::Float(*hi)]));
        fv.set("value", *value);
        out.set("family", fv);
    }
    out
}

/// A catalog entry as a document (fibre at the default parameter for families).
pub fn document_for_entry(entry: &crate::catalog::CatalogEntry) -> ModelDocument {
    ModelDocument {
        presentation: entry.presentation(),
        metric: Some(entry.metric_matrix()),
        u_scale: entry.u_scale.map(|s| C::new(s, 0.0)),
        family: entry
            .family
            .as_ref()
            .map(|f| (f.parameter.to_string(), f.range, f.default)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::model::build_model;

    #[test]
    fn torus_document_roundtrip() {
        let doc = document_for_entry(&catalog::entry("torus2").unwrap());
        let text = serialize_document(&doc).to_json();
        let parsed = parse_model(&text).unwrap();
        let again = serialize_document(&parsed).to_json();
        assert_eq!(text, again);
        // all-zero constants build fine
        assert!(build_model(&parsed.presentation).is_ok());
    }

    #[test]
    fn iwasawa_document_builds_with_correct_equations() {
        let doc = document_for_entry(&catalog::entry("iwasawa").unwrap());
        let text = serialize_document(&doc).to_json();
        let parsed = parse_model(&text).unwrap();
        let m = build_model(&parsed.presentation).unwrap();
        let phi3 = crate::form::Form::monomial(3, 0b100, 0, C::new(1.0, 0.0));
        let d3 = m.apply_diff(crate::model::OperatorTag::Del, &phi3).unwrap();
        let expect = crate::form::Form::monomial(3, 0b011, 0, C::new(-1.0, 0.0));
        assert!(d3.sub(&expect).norm_inf() < 1e-12);
    }

    #[test]
    fn antisymmetry_violation_is_ragged() {
        let text = r#"{
            "schema_version": 1,
            "name": "bad",
            "dim_real": 4,
            "structure_constants": [[1, 2, 3, 1.0], [1, 3, 2, 1.0]],
            "complex_structure": {"type": "coframe", "rows": [
                [[1,0],[0,1],[0,0],[0,0]],
                [[0,0],[0,0],[1,0],[0,1]]
            ]}
        }"#;
        match parse_model(text) {
            Err(Error::RaggedConstants(_)) => {}
            other => panic!("expected RaggedConstants, got {other:?}"),
        }
    }

    #[test]
    fn odd_dimension_rejected() {
        let text = r#"{"name": "odd", "dim_real": 5, "complex_structure": {"type": "J", "matrix": []}}"#;
        match parse_model(text) {
            Err(Error::DimensionOdd(5)) => {}
            other => panic!("expected DimensionOdd, got {other:?}"),
        }
    }

    #[test]
    fn schema_errors_carry_pointers() {
        let text = r#"{"name": "x", "dim_real": 4, "complex_structure": {"type": "coframe", "rows": [[[1,0]],[]]}}"#;
        match parse_model(text) {
            Err(Error::SchemaError { pointer, .. }) => {
                assert!(pointer.starts_with("/complex_structure/rows/0"), "{pointer}");
            }
            other => panic!("expected SchemaError, got {other:?}"),
        }
    }

    #[test]
    fn every_catalog_entry_roundtrips() {
        for e in catalog::entries() {
            let doc = document_for_entry(&e);
            let text = serialize_document(&doc).to_json();
            let parsed = parse_model(&text).unwrap();
            assert_eq!(text, serialize_document(&parsed).to_json(), "{}", e.name);
            assert!(build_model(&parsed.presentation).is_ok(), "{}", e.name);
        }
    }
}
