use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::{json, Value};

use super::coeff::{CoeffFn, Point};
use super::{Hbar, Window};
use crate::error::{Error, Result};
use crate::io::{as_array, as_object, get};

/// Power iteration stops once successive estimates agree to this relative
/// precision.
const POWER_TOL: f64 = 1e-15;
const POWER_MAX_ITERS: usize = 20_000;

/// `Σ_{(k,l)} M_{f_{k,l}} U_ħ^k V_ħ^l` with finitely many diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusOperator {
    hbar: Hbar,
    diagonals: BTreeMap<Point, CoeffFn>,
}

/// The phase of `U_ħ^k V_ħ^l e_{m,n} = e^{iħ(ml − nk − kl)/2} e_{m+k,n+l}`.
pub fn monomial_phase(hbar: f64, (k, l): Point, (m, n): Point) -> Complex64 {
    let exponent = (m * l - n * k - k * l) as f64;
    Complex64::from_polar(1.0, hbar * exponent / 2.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

impl TorusOperator {
    pub fn zero(hbar: Hbar) -> Self {
        TorusOperator {
            hbar,
            diagonals: BTreeMap::new(),
        }
    }

    /// `c · U_ħ^k V_ħ^l`.
    pub fn monomial(hbar: Hbar, k: i64, l: i64, c: Complex64) -> Self {
        Self::from_diagonals(hbar, [((k, l), CoeffFn::constant(c))])
    }

    pub fn identity(hbar: Hbar) -> Self {
        Self::monomial(hbar, 0, 0, one())
    }

    pub fn u(hbar: Hbar) -> Self {
        Self::monomial(hbar, 1, 0, one())
    }

    pub fn v(hbar: Hbar) -> Self {
        Self::monomial(hbar, 0, 1, one())
    }

    /// The multiplication operator `M_f`.
    pub fn multiplication(hbar: Hbar, f: CoeffFn) -> Self {
        Self::from_diagonals(hbar, [((0, 0), f)])
    }

    /// Sums coefficient functions that land on the same diagonal.
    pub fn from_diagonals(hbar: Hbar, diagonals: impl IntoIterator<Item = (Point, CoeffFn)>) -> Self {
        let mut out = Self::zero(hbar);
        for (d, f) in diagonals {
            out.add_to_diagonal(d, &f);
        }
        out
    }

    fn add_to_diagonal(&mut self, d: Point, f: &CoeffFn) {
        let sum = match self.diagonals.get(&d) {
            Some(g) => g.add(f),
            None => f.clone(),
        };
        if sum.is_zero() {
            self.diagonals.remove(&d);
        } else {
            self.diagonals.insert(d, sum);
        }
    }

    pub fn hbar(&self) -> Hbar {
        self.hbar
    }

    pub fn diagonals(&self) -> &BTreeMap<Point, CoeffFn> {
        &self.diagonals
    }

    pub fn diagonal(&self, k: i64, l: i64) -> Option<&CoeffFn> {
        self.diagonals.get(&(k, l))
    }

    fn same_hbar(&self, other: &Self) -> Result<()> {
        let (a, b) = (self.hbar.value(), other.hbar.value());
        if (a - b).abs() > 1e-15 {
            return Err(Error::HbarMismatch(a, b));
        }
        Ok(())
    }

    /// `⟨A e_{m,n}, e_{m',n'}⟩`.
    pub fn entry(&self, from: Point, to: Point) -> Complex64 {
        let d = (to.0 - from.0, to.1 - from.1);
        match self.diagonals.get(&d) {
            Some(f) => f.eval(to) * monomial_phase(self.hbar.value(), d, from),
            None => Complex64::new(0.0, 0.0),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_hbar(other)?;
        let mut out = self.clone();
        for (&d, f) in &other.diagonals {
            out.add_to_diagonal(d, f);
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::from_diagonals(self.hbar, self.diagonals.iter().map(|(&d, f)| (d, f.scale(c))))
    }

    fn map_diagonals(&self, f: impl Fn(Point, &CoeffFn) -> CoeffFn) -> Self {
        Self::from_diagonals(self.hbar, self.diagonals.iter().map(|(&d, g)| (d, f(d, g))))
    }

    /// Uses `(M_f U^k V^l)(M_g U^p V^q) = e^{iħlp} M_{f·τ_{k,l}g} U^{k+p} V^{l+q}`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_hbar(other)?;
        let h = self.hbar.value();
        let mut out = Self::zero(self.hbar);
        for (&(k, l), f) in &self.diagonals {
            for (&(p, q), g) in &other.diagonals {
                let phase = Complex64::from_polar(1.0, h * (l * p) as f64);
                let coeff = f.mul(&g.shift(k, l)).scale(phase);
                out.add_to_diagonal((k + p, l + q), &coeff);
            }
        }
        Ok(out)
    }

    /// Uses `(M_f U^k V^l)* = e^{iħkl} M_{τ_{−k,−l} f̄} U^{−k} V^{−l}`.
    pub fn adjoint(&self) -> Self {
        let h = self.hbar.value();
        Self::from_diagonals(
            self.hbar,
            self.diagonals.iter().map(|(&(k, l), f)| {
                let phase = Complex64::from_polar(1.0, h * (k * l) as f64);
                ((-k, -l), f.conj().shift(-k, -l).scale(phase))
            }),
        )
    }

    /// `θ_{x,y}(A) = M_{e^{i(mx+ny)}} A M_{e^{−i(mx+ny)}}`, which multiplies
    /// diagonal `(k, l)` by `e^{i(kx+ly)}`.
    pub fn theta(&self, x: f64, y: f64) -> Self {
        self.map_diagonals(|(k, l), f| f.scale(Complex64::from_polar(1.0, k as f64 * x + l as f64 * y)))
    }

    /// The `(k, l)` Fourier term: the part of `A` on the diagonal
    /// `m' = m + k`, `n' = n + l`.
    pub fn fourier_term(&self, k: i64, l: i64) -> Self {
        Self::from_diagonals(self.hbar, self.diagonal(k, l).map(|f| ((k, l), f.clone())))
    }

    /// `σ_N(A)`, scaling diagonal `(k, l)` by the Fejér weight
    /// `(1 − |k|/N)(1 − |l|/N)` and dropping diagonals with `|k|` or `|l| ≥ N`.
    pub fn cesaro(&self, n: u32) -> Self {
        let n = i64::from(n.max(1));
        Self::from_diagonals(
            self.hbar,
            self.diagonals
                .iter()
                .filter(|(&(k, l), _)| k.abs() < n && l.abs() < n)
                .map(|(&(k, l), f)| ((k, l), f.scale(Complex64::new(fejer_weight(n, k, l), 0.0)))),
        )
    }

    /// Whether every coefficient function is constant, i.e. `A` is a finite
    /// combination of monomials in `U_ħ`, `V_ħ`.
    pub fn in_torus_algebra(&self, tol: f64) -> bool {
        self.diagonals.values().all(|f| f.is_constant(tol))
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let zero = CoeffFn::default();
        (self.hbar.value() - other.hbar.value()).abs() <= 1e-15
            && self.diagonals.keys().chain(other.diagonals.keys()).all(|d| {
                let a = self.diagonals.get(d).unwrap_or(&zero);
                let b = other.diagonals.get(d).unwrap_or(&zero);
                a.approx_eq(b, tol)
            })
    }

    /// The compression of `A` to a window, as a dense matrix indexed by
    /// [`Window::points`]: `out[i][j] = ⟨A e_j, e_i⟩`.
    pub fn window_matrix(&self, window: &Window) -> Vec<Vec<Complex64>> {
        let pts: Vec<Point> = window.points().collect();
        pts.iter()
            .map(|&to| pts.iter().map(|&from| self.entry(from, to)).collect())
            .collect()
    }

    fn constant_free(&self) -> Result<()> {
        match self.diagonals.iter().find(|(_, f)| f.has_constant_part(0.0)) {
            Some((&(k, l), _)) => Err(Error::ConstantPart(k, l)),
            None => Ok(()),
        }
    }

    /// The smallest window holding every nonzero entry, as both source and
    /// target. `None` for the zero operator.
    pub fn support_window(&self) -> Option<Window> {
        let mut pts = Vec::new();
        for (&(k, l), f) in &self.diagonals {
            for (m, n) in f.support() {
                pts.push((m, n));
                pts.push((m - k, n - l));
            }
        }
        Window::bounding(pts)
    }

    /// Largest singular value of the compression to `window`. Refuses
    /// operators with constant parts, whose norm is not a finite computation.
    pub fn window_norm(&self, window: &Window) -> Result<f64> {
        self.constant_free()?;
        Ok(spectral_norm(&self.window_matrix(window)))
    }

    /// The operator norm of a constant-free operator.
    pub fn norm(&self) -> Result<f64> {
        self.constant_free()?;
        Ok(match self.support_window() {
            Some(w) => spectral_norm(&self.window_matrix(&w)),
            None => 0.0,
        })
    }

    pub fn to_json(&self) -> Value {
        let diagonals: Vec<Value> = self
            .diagonals
            .iter()
            .map(|(&(k, l), f)| {
                let mut d = f.to_json();
                d["k"] = json!(k);
                d["l"] = json!(l);
                d
            })
            .collect();
        json!({"hbar": self.hbar.to_json(), "diagonals": diagonals})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = as_object(v, "torus operator")?;
        let hbar = Hbar::from_json(get(obj, "hbar")?)?;
        let mut out = Self::zero(hbar);
        for d in as_array(get(obj, "diagonals")?, "diagonals")? {
            let d = as_object(d, "diagonal")?;
            let k = as_i64(get(d, "k")?, "k")?;
            let l = as_i64(get(d, "l")?, "l")?;
            out.add_to_diagonal((k, l), &CoeffFn::from_json(&Value::Object(d.clone()))?);
        }
        Ok(out)
    }
}

pub(crate) fn as_i64(v: &Value, what: &str) -> Result<i64> {
    v.as_i64()
        .ok_or_else(|| Error::Parse(format!("{what} must be an integer")))
}


/// `(1 − |k|/N)(1 − |l|/N)` for `|k|, |l| < N`, else zero.
pub fn fejer_weight(n: i64, k: i64, l: i64) -> f64 {
    if k.abs() >= n || l.abs() >= n {
        return 0.0;
    }
    let nf = n as f64;
    (1.0 - k.abs() as f64 / nf) * (1.0 - l.abs() as f64 / nf)
}

fn mat_vec(a: &[Vec<Complex64>], x: &[Complex64]) -> Vec<Complex64> {
    a.iter().map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum()).collect()
}

fn adj_vec(a: &[Vec<Complex64>], y: &[Complex64]) -> Vec<Complex64> {
    let cols = a.first().map_or(0, Vec::len);
    let mut out = vec![Complex64::new(0.0, 0.0); cols];
    for (row, yi) in a.iter().zip(y) {
        for (o, aij) in out.iter_mut().zip(row) {
            *o += aij.conj() * yi;
        }
    }
    out
}

fn norm2(x: &[Complex64]) -> f64 {
    x.iter().map(Complex64::norm_sqr).sum::<f64>().sqrt()
}

/// Largest singular value by power iteration on `A*A`.
pub fn spectral_norm(a: &[Vec<Complex64>]) -> f64 {
    let cols = a.first().map_or(0, Vec::len);
    if cols == 0 {
        return 0.0;
    }
    // A fixed, generic start vector keeps the result deterministic.
    let mut x: Vec<Complex64> = (0..cols)
        .map(|i| Complex64::from_polar(1.0 + (i % 7) as f64 / 7.0, 0.37 * i as f64))
        .collect();
    let mut estimate = 0.0;
    for _ in 0..POWER_MAX_ITERS {
        let nx = norm2(&x);
        if nx == 0.0 {
            return 0.0;
        }
        x.iter_mut().for_each(|v| *v /= nx);
        let y = mat_vec(a, &x);
        let sigma = norm2(&y);
        x = adj_vec(a, &y);
        if (sigma - estimate).abs() <= POWER_TOL * sigma.max(1.0) {
            return sigma;
        }
        estimate = sigma;
    }
    estimate
}
