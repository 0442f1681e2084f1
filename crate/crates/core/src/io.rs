//! JSON encodings of the library's values.
//!
//! Matrices are `{"rows", "cols", "entries": [[re, im], …]}` in row-major
//! order. Exact entries are strings `"p"` or `"p/q"` in lowest terms, so an
//! exact value survives a decode/encode round trip byte for byte.

use serde_json::{json, Map, Value};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::finite::{elements, subset_from_indices, Dist, FinPseudometric, FinSet, FiniteRelation, SubsetLattice};
use crate::linalg::{format_rational, parse_rational, Matrix, OperatorSubspace, Scalar};

pub fn matrix_to_json<S: Scalar>(m: &Matrix<S>) -> Value {
    json!({
        "rows": m.rows(),
        "cols": m.cols(),
        "entries": m.as_slice().iter().map(Scalar::to_json).collect::<Vec<_>>(),
    })
}

fn field<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    obj.get(key)
        .ok_or_else(|| Error::Parse(format!("missing field {key:?}")))
}

pub(crate) fn as_object<'a>(v: &'a Value, what: &str) -> Result<&'a Map<String, Value>> {
    v.as_object()
        .ok_or_else(|| Error::Parse(format!("{what} must be a JSON object")))
}

pub(crate) fn as_array<'a>(v: &'a Value, what: &str) -> Result<&'a Vec<Value>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("{what} must be a JSON array")))
}

pub(crate) fn as_usize(v: &Value, what: &str) -> Result<usize> {
    v.as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::Parse(format!("{what} must be a nonnegative integer")))
}

pub(crate) fn get<'a>(obj: &'a Map<String, Value>, key: &str) -> Result<&'a Value> {
    field(obj, key)
}

pub fn matrix_from_json<S: Scalar>(v: &Value) -> Result<Matrix<S>> {
    let obj = as_object(v, "matrix")?;
    let rows = as_usize(field(obj, "rows")?, "rows")?;
    let cols = as_usize(field(obj, "cols")?, "cols")?;
    if rows == 0 || cols == 0 {
        return Err(Error::Parse("matrix dimensions must be positive".into()));
    }
    let entries = as_array(field(obj, "entries")?, "entries")?;
    if entries.len() != rows * cols {
        return Err(Error::Parse(format!("{} entries for a {rows}x{cols} matrix", entries.len())));
    }
    let data = entries.iter().map(S::from_json).collect::<Result<Vec<_>>>()?;
    Matrix::from_vec(rows, cols, data)
}

/// A list of matrices: either a bare array or `{"matrices": [...]}`.
pub fn matrices_from_json<S: Scalar>(v: &Value) -> Result<Vec<Matrix<S>>> {
    let list = match v {
        Value::Array(a) => a,
        Value::Object(o) if o.contains_key("matrices") => as_array(&o["matrices"], "matrices")?,
        Value::Object(_) => return Ok(vec![matrix_from_json(v)?]),
        _ => return Err(Error::Parse("expected a matrix or a list of matrices".into())),
    };
    list.iter().map(matrix_from_json).collect()
}

pub fn subspace_to_json<S: Scalar>(v: &OperatorSubspace<S>) -> Value {
    json!({
        "n": v.n(),
        "dim": v.dim(),
        "basis": v.basis().iter().map(matrix_to_json).collect::<Vec<_>>(),
    })
}

/// Reads `{"basis": [...]}` (or a bare list) as a span inside `M_n`.
pub fn subspace_from_json<S: Scalar>(v: &Value, n: usize) -> Result<OperatorSubspace<S>> {
    let list = match v {
        Value::Object(o) if o.contains_key("basis") => &o["basis"],
        _ => v,
    };
    let ms = matrices_from_json(list)?;
    OperatorSubspace::try_span_in(n, n, &ms)
}

/// A rational given as a JSON integer, decimal, or `"p/q"` string.
pub fn rational_from_json(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::Parse("expected a rational number".into())),
    }
}

/// Reads `"atoms"` (a count or a list of labels) and optional `"weights"`.
pub fn finset_from_json(obj: &Map<String, Value>) -> Result<FinSet> {
    let labels: Vec<String> = match field(obj, "atoms")? {
        Value::Array(a) => a
            .iter()
            .map(|x| match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                _ => Err(Error::Parse("atom labels must be strings or numbers".into())),
            })
            .collect::<Result<_>>()?,
        v => (0..as_usize(v, "atoms")?).map(|i| i.to_string()).collect(),
    };
    let weights = match obj.get("weights") {
        Some(w) => as_array(w, "weights")?
            .iter()
            .map(rational_from_json)
            .collect::<Result<Vec<_>>>()?,
        None => vec![BigRational::from_integer(1.into()); labels.len()],
    };
    FinSet::new(labels, weights)
}

fn finset_fields(set: &FinSet) -> Map<String, Value> {
    let mut obj = Map::new();
    let counting = set.labels().iter().enumerate().all(|(i, l)| *l == i.to_string());
    obj.insert(
        "atoms".into(),
        if counting { json!(set.len()) } else { json!(set.labels()) },
    );
    obj.insert(
        "weights".into(),
        json!(set.weights().iter().map(format_rational).collect::<Vec<_>>()),
    );
    obj
}

fn index_pairs(v: &Value, n: usize) -> Result<Vec<(usize, usize)>> {
    as_array(v, "pairs")?
        .iter()
        .map(|p| {
            let p = as_array(p, "pair")?;
            if p.len() != 2 {
                return Err(Error::Parse("pairs must have two entries".into()));
            }
            let (x, y) = (as_usize(&p[0], "pair entry")?, as_usize(&p[1], "pair entry")?);
            if x >= n || y >= n {
                return Err(Error::Parse(format!("pair ({x}, {y}) out of range for {n} atoms")));
            }
            Ok((x, y))
        })
        .collect()
}

/// `{"atoms", "weights", "pairs"}`.
pub fn relation_to_json(set: &FinSet, r: &FiniteRelation) -> Value {
    let mut obj = finset_fields(set);
    obj.insert("pairs".into(), json!(r.pairs().iter().map(|&(x, y)| [x, y]).collect::<Vec<_>>()));
    Value::Object(obj)
}

pub fn relation_from_json(v: &Value) -> Result<(FinSet, FiniteRelation)> {
    let obj = as_object(v, "relation")?;
    let set = finset_from_json(obj)?;
    let pairs = index_pairs(field(obj, "pairs")?, set.len())?;
    let r = FiniteRelation::from_pairs(set.len(), &pairs)?;
    Ok((set, r))
}

/// `{"atoms", "members": [[indices], …]}` with members in increasing
/// bitmask order.
pub fn lattice_to_json(l: &SubsetLattice) -> Value {
    let members: Vec<Vec<usize>> = l.members().map(|s| elements(s).collect()).collect();
    json!({"atoms": l.size(), "members": members})
}

pub fn lattice_from_json(v: &Value) -> Result<SubsetLattice> {
    let obj = as_object(v, "lattice")?;
    let n = finset_from_json(obj)?.len();
    let members = as_array(field(obj, "members")?, "members")?
        .iter()
        .map(|m| {
            let idx = as_array(m, "member")?
                .iter()
                .map(|x| as_usize(x, "member entry"))
                .collect::<Result<Vec<_>>>()?;
            if let Some(x) = idx.iter().find(|&&x| x >= n) {
                return Err(Error::Parse(format!("atom {x} out of range for {n} atoms")));
            }
            Ok(subset_from_indices(&idx))
        })
        .collect::<Result<Vec<_>>>()?;
    SubsetLattice::new(n, members)
}

fn dist_to_json(d: &Dist) -> Value {
    match d {
        Dist::Finite(x) => json!(format_rational(x)),
        Dist::Infinite => json!("inf"),
    }
}

/// `{"atoms", "d": [[…]]}` with `"inf"` for infinite distances.
pub fn pseudometric_to_json(m: &FinPseudometric) -> Value {
    let d: Vec<Vec<Value>> = m.matrix().iter().map(|row| row.iter().map(dist_to_json).collect()).collect();
    json!({"atoms": m.size(), "d": d})
}

pub fn pseudometric_from_json(v: &Value) -> Result<FinPseudometric> {
    let obj = as_object(v, "pseudometric")?;
    let n = finset_from_json(obj)?.len();
    let rows = as_array(field(obj, "d")?, "d")?;
    if rows.len() != n {
        return Err(Error::Parse(format!("d has {} rows for {n} atoms", rows.len())));
    }
    let d = rows
        .iter()
        .map(|row| {
            let row = as_array(row, "d row")?;
            if row.len() != n {
                return Err(Error::Parse(format!("d rows must have {n} entries")));
            }
            row.iter()
                .map(|x| match x {
                    Value::String(s) if s == "inf" => Ok(Dist::Infinite),
                    _ => rational_from_json(x).map(Dist::Finite),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    FinPseudometric::new(d)
}
