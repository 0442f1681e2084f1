//! Banded operators on `ℓ²(ℤ²)` and the quantum torus.
//!
//! `U_ħ e_{m,n} = e^{−iħn/2} e_{m+1,n}` and `V_ħ e_{m,n} = e^{iħm/2} e_{m,n+1}`.
//! Operators are kept symbolically as finitely many diagonals
//! `M_{f_{k,l}} U_ħ^k V_ħ^l`; only norm computations materialize a finite
//! matrix. Scalars are complex doubles.

mod coeff;
mod operator;
mod space;

use num_integer::Integer;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::io::{as_object, get};

pub use coeff::{CoeffFn, Point};
pub use operator::{fejer_weight, monomial_phase, spectral_norm, TorusOperator};
pub use space::{check_translation_invariant_relation, rephase, CoefficientSpace, DiagonalFailure, RelationReport};

/// Default tolerance for float comparisons on torus operators.
pub const TORUS_TOL: f64 = 1e-9;

/// `ħ = num/den`, optionally times `π`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Hbar {
    num: i64,
    den: i64,
    times_pi: bool,
}

impl Hbar {
    fn new(num: i64, den: i64, times_pi: bool) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invalid("hbar denominator must be nonzero".into()));
        }
        let g = num.gcd(&den) * den.signum();
        Ok(Hbar {
            num: num / g,
            den: den / g,
            times_pi,
        })
    }

    /// `ħ = π·num/den`.
    pub fn pi_times(num: i64, den: i64) -> Self {
        Self::new(num, den, true).expect("nonzero denominator")
    }

    pub fn rational(num: i64, den: i64) -> Self {
        Self::new(num, den, false).expect("nonzero denominator")
    }

    pub fn value(&self) -> f64 {
        let q = self.num as f64 / self.den as f64;
        if self.times_pi {
            q * std::f64::consts::PI
        } else {
            q
        }
    }

    /// `−ħ`, the parameter of the commutant.
    pub fn negated(&self) -> Self {
        Hbar {
            num: -self.num,
            ..*self
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"num": self.num, "den": self.den, "times_pi": self.times_pi})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v, "hbar")?;
        let num = operator::as_i64(get(obj, "num")?, "num")?;
        let den = match obj.get("den") {
            Some(d) => operator::as_i64(d, "den")?,
            None => 1,
        };
        let times_pi = match obj.get("times_pi") {
            Some(Value::Bool(b)) => *b,
            None => true,
            Some(_) => return Err(Error::Parse("times_pi must be a boolean".into())),
        };
        Self::new(num, den, times_pi).map_err(|_| Error::Parse("hbar denominator must be nonzero".into()))
    }
}

/// An inclusive rectangle of lattice points `[m0, m1] × [n0, n1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub m0: i64,
    pub m1: i64,
    pub n0: i64,
    pub n1: i64,
}

impl Window {
    pub fn new(m0: i64, m1: i64, n0: i64, n1: i64) -> Self {
        assert!(m0 <= m1 && n0 <= n1, "empty window");
        Window { m0, m1, n0, n1 }
    }

    /// The `(2r + 1) × (2r + 1)` square centred at the origin.
    pub fn centered(r: i64) -> Self {
        Self::new(-r, r, -r, r)
    }

    pub fn bounding(points: impl IntoIterator<Item = Point>) -> Option<Self> {
        points.into_iter().fold(None, |acc, (m, n)| {
            Some(match acc {
                None => Window::new(m, m, n, n),
                Some(w) => Window::new(w.m0.min(m), w.m1.max(m), w.n0.min(n), w.n1.max(n)),
            })
        })
    }

    pub fn expand(&self, r: i64) -> Self {
        Self::new(self.m0 - r, self.m1 + r, self.n0 - r, self.n1 + r)
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(
            self.m0.min(other.m0),
            self.m1.max(other.m1),
            self.n0.min(other.n0),
            self.n1.max(other.n1),
        )
    }

    pub fn contains(&self, (m, n): Point) -> bool {
        (self.m0..=self.m1).contains(&m) && (self.n0..=self.n1).contains(&n)
    }

    pub fn len(&self) -> usize {
        ((self.m1 - self.m0 + 1) * (self.n1 - self.n0 + 1)) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Points in row-major order (`m` outer, `n` inner).
    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (self.m0..=self.m1).flat_map(move |m| (self.n0..=self.n1).map(move |n| (m, n)))
    }
}
