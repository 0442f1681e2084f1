use num_complex::Complex64;
use serde_json::{json, Value};

use super::coeff::{CoeffFn, Point};
use super::{TorusOperator, Window};

/// Margin added around supports when a coefficient function is compared
/// against a subspace on a finite window.
const MARGIN: i64 = 2;

/// A translation-invariant space `𝓔` of coefficient functions.
///
/// `Span` holds generators; the space is the span of all their translates.
#[derive(Clone, Debug)]
pub enum CoefficientSpace {
    All,
    FinitelySupported,
    Constants,
    Span(Vec<CoeffFn>),
}

/// A coefficient function `f` on diagonal `(k, l)` rewritten against the
/// `U_{−ħ}^k V_{−ħ}^l` convention: `g(m, n) = f(m, n)·e^{iħ(ml − nk − kl)}`.
pub fn rephase(hbar: f64, (k, l): Point, f: &CoeffFn) -> impl Fn(Point) -> Complex64 + '_ {
    move |(m, n)| f.eval((m, n)) * Complex64::from_polar(1.0, hbar * (m * l - n * k - k * l) as f64)
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    dot(a, a).re.sqrt()
}

/// Whether `target` lies in the span of `columns`, by Gram–Schmidt.
fn in_span(columns: Vec<Vec<Complex64>>, target: &[Complex64], tol: f64) -> bool {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for mut c in columns {
        for b in &basis {
            let p = dot(&c, b);
            c.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
        }
        let nc = norm(&c);
        if nc > 1e-10 {
            c.iter_mut().for_each(|x| *x /= nc);
            basis.push(c);
        }
    }
    let mut r = target.to_vec();
    for b in &basis {
        let p = dot(&r, b);
        r.iter_mut().zip(b).for_each(|(x, y)| *x -= p * y);
    }
    norm(&r) <= tol * (1.0 + norm(target))
}

impl CoefficientSpace {
    /// Tests whether the rephased coefficient of diagonal `(k, l)` lies in
    /// the space. Functions with a nonzero constant part rephase to
    /// characters, which are compared on a window around their support.
    pub fn contains_rephased(&self, hbar: f64, d: Point, f: &CoeffFn, tol: f64) -> bool {
        let g = rephase(hbar, d, f);
        let inner = Window::bounding(f.support())
            .unwrap_or(Window::centered(0))
            .expand(MARGIN);
        match self {
            CoefficientSpace::All => true,
            CoefficientSpace::FinitelySupported => !f.has_constant_part(tol),
            CoefficientSpace::Constants => {
                let g0 = g((inner.m0, inner.n0));
                inner.points().all(|p| (g(p) - g0).norm() <= tol)
            }
            CoefficientSpace::Span(gens) => {
                let mut translates: Vec<CoeffFn> = Vec::new();
                for h in gens {
                    match Window::bounding(h.support()) {
                        None => translates.push(h.clone()),
                        Some(hw) => {
                            for a in inner.m0 - hw.m1..=inner.m1 - hw.m0 {
                                for b in inner.n0 - hw.n1..=inner.n1 - hw.n0 {
                                    translates.push(h.shift(a, b));
                                }
                            }
                        }
                    }
                }
                let outer = translates
                    .iter()
                    .filter_map(|t| Window::bounding(t.support()))
                    .fold(inner, |w, t| w.union(&t))
                    .expand(MARGIN);
                let pts: Vec<Point> = outer.points().collect();
                let columns = translates
                    .iter()
                    .map(|t| pts.iter().map(|&p| t.eval(p)).collect())
                    .collect();
                let target: Vec<Complex64> = pts.iter().map(|&p| g(p)).collect();
                in_span(columns, &target, tol)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalFailure {
    pub generator: usize,
    pub k: i64,
    pub l: i64,
}

#[derive(Clone, Debug)]
pub struct RelationReport {
    pub passed: bool,
    /// Number of (generator, diagonal) pairs examined.
    pub checked: usize,
    pub failures: Vec<DiagonalFailure>,
}

impl RelationReport {
    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed,
            "checked": self.checked,
            "failures": self
                .failures
                .iter()
                .map(|f| json!({"generator": f.generator, "k": f.k, "l": f.l}))
                .collect::<Vec<_>>(),
        })
    }
}

/// Checks `A_{k,l} ∈ 𝓔·U_{−ħ}^k V_{−ħ}^l` for every generator and every
/// stored diagonal, i.e. that each generator lies in the translation
/// invariant quantum relation determined by `𝓔`.
pub fn check_translation_invariant_relation(
    generators: &[TorusOperator],
    space: &CoefficientSpace,
    tol: f64,
) -> RelationReport {
    let mut failures = Vec::new();
    let mut checked = 0;
    for (i, a) in generators.iter().enumerate() {
        let h = a.hbar().value();
        for (&(k, l), f) in a.diagonals() {
            checked += 1;
            if !space.contains_rephased(h, (k, l), f, tol) {
                failures.push(DiagonalFailure { generator: i, k, l });
            }
        }
    }
    RelationReport {
        passed: failures.is_empty(),
        checked,
        failures,
    }
}
