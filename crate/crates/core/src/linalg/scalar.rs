//! Scalar fields with a decidable zero test.
//!
//! Two implementations are provided. [`GaussRat`] is an exact Gaussian
//! rational `a + bi` with `a, b ∈ ℚ`; all algebraic code defaults to it so
//! that subspace equality is decidable. [`Cf64`] is a complex double that
//! carries its own zero-test tolerance.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

/// Default zero-test tolerance for floating-point scalars.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// A field of complex scalars with an exact or tolerance-based zero test.
///
/// Arithmetic is exposed as by-reference methods so that big-number
/// implementations avoid needless clones.
pub trait Scalar: Clone + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const MODE: Mode;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_ints(re: i64, im: i64) -> Self;
    fn from_rationals(re: &BigRational, im: &BigRational) -> Self;

    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;

    /// Approximate modulus, used for pivot selection only.
    fn magnitude(&self) -> f64;
    fn to_complex(&self) -> Complex64;

    /// `[re, im]`: strings `"p"`/`"p/q"` in exact mode, numbers in float mode.
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    /// Equality under the field's zero test.
    fn same(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Squared modulus `z·z̄`, returned as a scalar (real-valued).
    fn norm_sqr(&self) -> Self {
        self.mul(&self.conj())
    }
}

/// Exact Gaussian rational `re + im·i`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussRat {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussRat { re, im }
    }

    pub fn real(re: BigRational) -> Self {
        GaussRat {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        GaussRat::real(BigRational::new(num.into(), den.into()))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

fn fmt_rational(q: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if q.denom().is_one() {
        write!(f, "{}", q.numer())
    } else {
        write!(f, "{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"p"`, `"p/q"` or a plain decimal like `"0.25"`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let q = BigInt::from_str(q.trim()).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        if q.is_zero() {
            return Err(Error::Parse(format!("{s:?}: zero denominator")));
        }
        return Ok(BigRational::new(p, q));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let p = BigInt::from_str(&digits).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
        let q = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(p, q);
        return Ok(if neg { -r } else { r });
    }
    let p = BigInt::from_str(s).map_err(|e| Error::Parse(format!("{s:?}: {e}")))?;
    Ok(BigRational::from_integer(p))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return fmt_rational(&self.re, f);
        }
        if !self.re.is_zero() {
            fmt_rational(&self.re, f)?;
            write!(f, "{}", if self.im.is_negative() { "-" } else { "+" })?;
            fmt_rational(&self.im.abs(), f)?;
        } else {
            fmt_rational(&self.im, f)?;
        }
        write!(f, "i")
    }
}

fn rat_to_f64(q: &BigRational) -> f64 {
    q.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for GaussRat {
    const MODE: Mode = Mode::Exact;

    fn zero() -> Self {
        GaussRat::real(BigRational::zero())
    }

    fn one() -> Self {
        GaussRat::real(BigRational::one())
    }

    fn from_ints(re: i64, im: i64) -> Self {
        GaussRat {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    fn from_rationals(re: &BigRational, im: &BigRational) -> Self {
        GaussRat {
            re: re.clone(),
            im: im.clone(),
        }
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    fn same(&self, other: &Self) -> bool {
        self == other
    }

    fn add(&self, rhs: &Self) -> Self {
        GaussRat {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }

    fn sub(&self, rhs: &Self) -> Self {
        GaussRat {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        if self.im.is_zero() && rhs.im.is_zero() {
            return GaussRat::real(&self.re * &rhs.re);
        }
        GaussRat {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }

    fn neg(&self) -> Self {
        GaussRat {
            re: -&self.re,
            im: -&self.im,
        }
    }

    fn conj(&self) -> Self {
        GaussRat {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        if self.im.is_zero() {
            return GaussRat::real(self.re.recip());
        }
        let d = &self.re * &self.re + &self.im * &self.im;
        GaussRat {
            re: &self.re / &d,
            im: -&self.im / &d,
        }
    }

    fn magnitude(&self) -> f64 {
        rat_to_f64(&self.re).hypot(rat_to_f64(&self.im))
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }

    fn to_json(&self) -> Value {
        json!([format_rational(&self.re), format_rational(&self.im)])
    }

    fn from_json(v: &Value) -> Result<Self> {
        let (re, im) = json_pair(v)?;
        Ok(GaussRat::new(json_rational(re)?, json_rational(im)?))
    }
}

fn json_pair(v: &Value) -> Result<(&Value, &Value)> {
    match v.as_array().map(Vec::as_slice) {
        Some([re, im]) => Ok((re, im)),
        _ => Err(Error::Parse(format!("expected [re, im], found {v}"))),
    }
}

fn json_rational(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(BigRational::from_integer(n.as_i64().unwrap().into())),
        Value::Number(n) => parse_rational(&n.to_string()),
        _ => Err(Error::Parse(format!("expected a rational, found {v}"))),
    }
}

fn json_f64(v: &Value) -> Result<f64> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| Error::Parse(format!("number {n} out of range"))),
        Value::String(s) => parse_rational(s).map(|q| rat_to_f64(&q)),
        _ => Err(Error::Parse(format!("expected a number, found {v}"))),
    }
}

/// Complex double with a per-value zero-test tolerance.
///
/// Binary operations keep the larger tolerance of their operands. The
/// constants returned by [`Scalar::zero`] and [`Scalar::one`] carry tolerance
/// zero so that they inherit the tolerance of the data they combine with.
#[derive(Clone, Copy, Debug)]
pub struct Cf64 {
    pub re: f64,
    pub im: f64,
    pub tol: f64,
}

impl Cf64 {
    pub fn new(re: f64, im: f64) -> Self {
        Cf64 {
            re,
            im,
            tol: DEFAULT_TOL,
        }
    }

    pub fn with_tol(self, tol: f64) -> Self {
        Cf64 { tol, ..self }
    }

    pub fn from_complex(z: Complex64, tol: f64) -> Self {
        Cf64 {
            re: z.re,
            im: z.im,
            tol,
        }
    }

    fn combine(&self, rhs: &Self, re: f64, im: f64) -> Self {
        Cf64 {
            re,
            im,
            tol: self.tol.max(rhs.tol),
        }
    }
}

impl fmt::Display for Cf64 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im == 0.0 {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{}{:+}i", self.re, self.im)
        }
    }
}

impl Scalar for Cf64 {
    const MODE: Mode = Mode::Float;

    fn zero() -> Self {
        Cf64 {
            re: 0.0,
            im: 0.0,
            tol: 0.0,
        }
    }

    fn one() -> Self {
        Cf64 {
            re: 1.0,
            im: 0.0,
            tol: 0.0,
        }
    }

    fn from_ints(re: i64, im: i64) -> Self {
        Cf64::new(re as f64, im as f64)
    }

    fn from_rationals(re: &BigRational, im: &BigRational) -> Self {
        Cf64::new(rat_to_f64(re), rat_to_f64(im))
    }

    fn is_zero(&self) -> bool {
        self.re.hypot(self.im) <= self.tol
    }

    fn add(&self, rhs: &Self) -> Self {
        self.combine(rhs, self.re + rhs.re, self.im + rhs.im)
    }

    fn sub(&self, rhs: &Self) -> Self {
        self.combine(rhs, self.re - rhs.re, self.im - rhs.im)
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.combine(
            rhs,
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }

    fn neg(&self) -> Self {
        Cf64 {
            re: -self.re,
            im: -self.im,
            tol: self.tol,
        }
    }

    fn conj(&self) -> Self {
        Cf64 {
            im: -self.im,
            ..*self
        }
    }

    fn inv(&self) -> Self {
        let d = self.re * self.re + self.im * self.im;
        assert!(d > 0.0, "inverse of zero");
        Cf64 {
            re: self.re / d,
            im: -self.im / d,
            tol: self.tol,
        }
    }

    fn magnitude(&self) -> f64 {
        self.re.hypot(self.im)
    }

    fn to_complex(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn to_json(&self) -> Value {
        json!([self.re, self.im])
    }

    fn from_json(v: &Value) -> Result<Self> {
        let (re, im) = json_pair(v)?;
        Ok(Cf64::new(json_f64(re)?, json_f64(im)?))
    }
}
