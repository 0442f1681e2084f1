use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{as_array, as_object};

pub type Point = (i64, i64);

/// A bounded function on `ℤ²` of the form `constant + table`, where the
/// table is finitely supported.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct CoeffFn {
    constant: Complex64,
    table: BTreeMap<Point, Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl CoeffFn {
    pub fn constant(c: Complex64) -> Self {
        CoeffFn {
            constant: c,
            table: BTreeMap::new(),
        }
    }

    /// `c · δ_{(m, n)}`.
    pub fn delta(at: Point, c: Complex64) -> Self {
        Self::from_parts(zero(), [(at, c)])
    }

    /// The function equal to `constant + table[x]`; zero table entries are
    /// dropped.
    pub fn from_parts(constant: Complex64, table: impl IntoIterator<Item = (Point, Complex64)>) -> Self {
        let mut out = CoeffFn::constant(constant);
        for (p, v) in table {
            *out.table.entry(p).or_insert_with(zero) += v;
        }
        out.prune();
        out
    }

    fn prune(&mut self) {
        self.table.retain(|_, v| *v != zero());
    }

    pub fn constant_part(&self) -> Complex64 {
        self.constant
    }

    /// Deviations from the constant part, keyed by point.
    pub fn table(&self) -> &BTreeMap<Point, Complex64> {
        &self.table
    }

    pub fn eval(&self, (m, n): Point) -> Complex64 {
        self.constant + self.table.get(&(m, n)).copied().unwrap_or_else(zero)
    }

    pub fn is_zero(&self) -> bool {
        self.constant == zero() && self.table.is_empty()
    }

    pub fn is_constant(&self, tol: f64) -> bool {
        self.table.values().all(|v| v.norm() <= tol)
    }

    pub fn has_constant_part(&self, tol: f64) -> bool {
        self.constant.norm() > tol
    }

    /// `τ_{k,l} f(m, n) = f(m − k, n − l)`.
    pub fn shift(&self, k: i64, l: i64) -> Self {
        CoeffFn {
            constant: self.constant,
            table: self.table.iter().map(|(&(m, n), &v)| ((m + k, n + l), v)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        CoeffFn {
            constant: self.constant.conj(),
            table: self.table.iter().map(|(&p, v)| (p, v.conj())).collect(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        let mut out = CoeffFn {
            constant: self.constant * c,
            table: self.table.iter().map(|(&p, &v)| (p, v * c)).collect(),
        };
        out.prune();
        out
    }

    fn combine(&self, other: &Self, op: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let constant = op(self.constant, other.constant);
        let points = self.table.keys().chain(other.table.keys());
        let table = points.map(|&p| (p, op(self.eval(p), other.eval(p)) - constant));
        let mut out = CoeffFn {
            constant,
            table: table.collect(),
        };
        out.prune();
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a - b)
    }

    /// Pointwise product.
    pub fn mul(&self, other: &Self) -> Self {
        self.combine(other, |a, b| a * b)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (self.constant - other.constant).norm() <= tol
            && self
                .table
                .keys()
                .chain(other.table.keys())
                .all(|&p| (self.eval(p) - other.eval(p)).norm() <= tol)
    }

    /// `{"const": [re, im], "table": [[m, n, re, im], …]}`.
    pub fn to_json(&self) -> Value {
        let table: Vec<Value> = self
            .table
            .iter()
            .map(|(&(m, n), v)| json!([m, n, v.re, v.im]))
            .collect();
        json!({"const": [self.constant.re, self.constant.im], "table": table})
    }

    /// Inverse of [`CoeffFn::to_json`]; both fields are optional.
    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v, "coefficient function")?;
        let constant = match obj.get("const") {
            Some(c) => match as_array(c, "const")?.as_slice() {
                [re, im] => Complex64::new(as_f64(re)?, as_f64(im)?),
                _ => return Err(Error::Parse("const must be [re, im]".into())),
            },
            None => zero(),
        };
        let mut table = Vec::new();
        if let Some(t) = obj.get("table") {
            for row in as_array(t, "table")? {
                match as_array(row, "table row")?.as_slice() {
                    [m, n, re, im] => table.push(((as_i64(m)?, as_i64(n)?), Complex64::new(as_f64(re)?, as_f64(im)?))),
                    _ => return Err(Error::Parse("table rows must be [m, n, re, im]".into())),
                }
            }
        }
        Ok(Self::from_parts(constant, table))
    }

    /// Points where the table is nonzero.
    pub fn support(&self) -> impl Iterator<Item = Point> + '_ {
        self.table.keys().copied()
    }
}

fn as_f64(v: &Value) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Parse(format!("expected a number, found {v}")))
}

fn as_i64(v: &Value) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::Parse(format!("expected an integer, found {v}")))
}
