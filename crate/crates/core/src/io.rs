//! JSON input files and the compact literal syntax used on the command line.
//!
//! Rationals are written as strings `"p/q"` (plain integers are accepted
//! on input). Bracket entries use 1-based indices.

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::algebra::{AlgVector, LieAlgebra, MAX_DIM};
use crate::eps_poly::EpsPoly;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::oracle::Representation;
use crate::scalar::{format_rational, parse_rational, Rational};

#[derive(Debug, Deserialize, Serialize)]
struct AlgebraFile {
    dim: usize,
    #[serde(default)]
    basis: Option<Vec<String>>,
    #[serde(default)]
    brackets: Vec<Vec<Value>>,
}

#[derive(Debug, Deserialize)]
struct FamilyFile {
    phis: Vec<Value>,
}

fn parse_json(text: &str, what: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| {
        Error::Parse(format!(
            "{what}: {e} (line {}, column {})",
            e.line(),
            e.column()
        ))
    })
}

fn scalar(v: &Value, field: &str) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s).map_err(|e| Error::Parse(format!("{field}: {e}"))),
        Value::Number(n) if n.is_i64() => Ok(Rational::from_integer(n.as_i64().unwrap_or(0).into())),
        other => Err(Error::Parse(format!(
            "{field}: expected a rational string like \"p/q\", got {other}"
        ))),
    }
}

fn vector(v: &Value, field: &str) -> Result<Vec<Rational>> {
    let items = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{field}: expected a list of rationals")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| scalar(x, &format!("{field}[{i}]")))
        .collect()
}

fn matrix(v: &Value, field: &str) -> Result<Matrix> {
    let rows = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("{field}: expected a list of rows")))?;
    let rows = rows
        .iter()
        .enumerate()
        .map(|(i, r)| vector(r, &format!("{field}[{i}]")))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows).ok_or_else(|| Error::Parse(format!("{field}: rows have different lengths")))
}

fn index(v: &Value, field: &str, dim: usize) -> Result<usize> {
    let i = v
        .as_u64()
        .ok_or_else(|| Error::Parse(format!("{field}: expected a positive integer index")))?;
    if i == 0 || i as usize > dim {
        return Err(Error::Parse(format!("{field}: index {i} outside 1..={dim}")));
    }
    Ok(i as usize - 1)
}

/// Reads an algebra without checking the Lie axioms, so that `validate`
/// can report on broken tensors.
pub fn parse_algebra_unchecked(text: &str) -> Result<LieAlgebra> {
    let value = parse_json(text, "algebra file")?;
    let file: AlgebraFile =
        serde_json::from_value(value).map_err(|e| Error::Parse(format!("algebra file: {e}")))?;
    if file.dim == 0 || file.dim > MAX_DIM {
        return Err(Error::Parse(format!("dim: must be between 1 and {MAX_DIM}, got {}", file.dim)));
    }
    let names = match file.basis {
        Some(names) if names.len() != file.dim => {
            return Err(Error::Parse(format!(
                "basis: {} names given for dim {}",
                names.len(),
                file.dim
            )))
        }
        Some(names) => names,
        None => (1..=file.dim).map(|i| format!("X{i}")).collect(),
    };
    let mut entries = Vec::with_capacity(file.brackets.len());
    for (i, e) in file.brackets.iter().enumerate() {
        let field = format!("brackets[{i}]");
        if e.len() != 4 {
            return Err(Error::Parse(format!("{field}: expected [a, b, c, \"p/q\"]")));
        }
        entries.push((
            index(&e[0], &field, file.dim)?,
            index(&e[1], &field, file.dim)?,
            index(&e[2], &field, file.dim)?,
            scalar(&e[3], &field)?,
        ));
    }
    LieAlgebra::from_brackets_unchecked(names, &entries)
}

/// Algebra in the input file format: only `a < b` nonzero entries, plus
/// any entry that breaks antisymmetry so the tensor round-trips.
pub fn algebra_to_json(alg: &LieAlgebra) -> Value {
    let n = alg.dim();
    let mut brackets = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let v = alg.structure(a, b, c);
                let mirror = alg.structure(b, a, c);
                let keep = if a < b {
                    !v.is_zero()
                } else {
                    // a >= b: only needed when it is not the completion of (b, a).
                    &(-mirror.clone()) != v
                };
                if keep {
                    brackets.push(json!([a + 1, b + 1, c + 1, format_rational(v)]));
                }
            }
        }
    }
    json!({ "dim": n, "basis": alg.names(), "brackets": brackets })
}

/// Subalgebra file: a list of coefficient vectors.
pub fn parse_subalgebra(text: &str, dim: usize) -> Result<Vec<AlgVector>> {
    let value = parse_json(text, "subalgebra file")?;
    let list = value
        .as_array()
        .ok_or_else(|| Error::Parse("subalgebra file: expected a list of vectors".into()))?;
    list.iter()
        .enumerate()
        .map(|(i, v)| {
            let field = format!("vector {}", i + 1);
            let coeffs = vector(v, &field)?;
            if coeffs.len() != dim {
                return Err(Error::Parse(format!(
                    "{field}: has {} entries, the algebra has dimension {dim}",
                    coeffs.len()
                )));
            }
            Ok(AlgVector(coeffs))
        })
        .collect()
}

/// Family file `{"phis": [Φ_0, Φ_1, …]}`.
pub fn parse_family(text: &str) -> Result<Vec<Matrix>> {
    let value = parse_json(text, "family file")?;
    let file: FamilyFile =
        serde_json::from_value(value).map_err(|e| Error::Parse(format!("family file: {e}")))?;
    file.phis
        .iter()
        .enumerate()
        .map(|(j, m)| matrix(m, &format!("phis[{j}]")))
        .collect()
}

/// Representation file: an object mapping each basis name to its matrix.
pub fn parse_representation(text: &str, alg: &LieAlgebra) -> Result<Representation> {
    let value = parse_json(text, "representation file")?;
    let map = value
        .as_object()
        .ok_or_else(|| Error::Parse("representation file: expected an object keyed by basis name".into()))?;
    if let Some(extra) = map.keys().find(|k| !alg.names().contains(k)) {
        return Err(Error::Parse(format!("representation file: unknown basis name {extra:?}")));
    }
    let mats = alg
        .names()
        .iter()
        .map(|name| {
            let m = map
                .get(name)
                .ok_or_else(|| Error::Parse(format!("representation file: no matrix for {name:?}")))?;
            matrix(m, name)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Representation::new(mats))
}

pub fn representation_to_json(alg: &LieAlgebra, rep: &Representation) -> Value {
    let mut map = serde_json::Map::new();
    for (name, m) in alg.names().iter().zip(rep.mats()) {
        map.insert(name.clone(), matrix_to_json(m));
    }
    Value::Object(map)
}

pub fn vector_to_json(v: &AlgVector) -> Value {
    Value::Array(v.0.iter().map(|x| Value::String(format_rational(x))).collect())
}

pub fn matrix_to_json(m: &Matrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| Value::Array(m.row(i).iter().map(|x| Value::String(format_rational(x))).collect()))
            .collect(),
    )
}

pub fn jet_to_json(p: &EpsPoly) -> Value {
    json!({
        "trunc": p.trunc(),
        "coeffs": p.coeffs().iter().map(vector_to_json).collect::<Vec<_>>(),
    })
}

fn parse_row(text: &str, what: &str) -> Result<Vec<Rational>> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Parse(format!("{what}: empty entry")));
    }
    text.split(',')
        .map(|s| parse_rational(s.trim()).map_err(|e| Error::Parse(format!("{what}: {e}"))))
        .collect()
}

fn strip_brackets(text: &str) -> &str {
    let t = text.trim();
    t.strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .unwrap_or(t)
}

/// `"v0; v1; …"`, each `v` a comma-separated vector. Brackets optional.
pub fn parse_vector_list(text: &str, dim: usize) -> Result<Vec<AlgVector>> {
    strip_brackets(text)
        .split(';')
        .enumerate()
        .map(|(i, part)| {
            let what = format!("entry {}", i + 1);
            let row = parse_row(part, &what)?;
            if row.len() != dim {
                return Err(Error::Parse(format!(
                    "{what}: has {} components, expected {dim}",
                    row.len()
                )));
            }
            Ok(AlgVector(row))
        })
        .collect()
}

/// Jet literal `"[v0; v1; v2]"`, index = ε-power.
pub fn parse_jet(text: &str, dim: usize, trunc: usize) -> Result<EpsPoly> {
    let coeffs = parse_vector_list(text, dim)?;
    if coeffs.len() > trunc {
        return Err(Error::Parse(format!(
            "jet has {} coefficients but truncation is {trunc}",
            coeffs.len()
        )));
    }
    EpsPoly::new(dim, trunc, coeffs)
}

/// Matrix literal `"a, b; c, d"`.
pub fn parse_matrix(text: &str) -> Result<Matrix> {
    let rows = strip_brackets(text)
        .split(';')
        .enumerate()
        .map(|(i, r)| parse_row(r, &format!("matrix row {}", i + 1)))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows).ok_or_else(|| Error::Parse("matrix rows have different lengths".into()))
}
