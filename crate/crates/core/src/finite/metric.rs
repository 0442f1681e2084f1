use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde_json::json;

use super::{elements, FiniteRelation, MeasurableRelation, Subset};
use crate::error::{Error, Result};
use crate::linalg::{GaussRat, Scalar};

/// A distance in `[0, ∞]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Dist {
    Finite(BigRational),
    Infinite,
}

impl Dist {
    pub fn zero() -> Self {
        Dist::Finite(BigRational::zero())
    }

    pub fn from_int(x: i64) -> Self {
        Dist::Finite(BigRational::from_integer(x.into()))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Dist::Finite(x) if x.is_zero())
    }

    pub fn add(&self, other: &Dist) -> Dist {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => Dist::Finite(a + b),
            _ => Dist::Infinite,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Dist::Finite(x) => x.to_f64().unwrap_or(f64::NAN),
            Dist::Infinite => f64::INFINITY,
        }
    }
}

impl PartialOrd for Dist {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dist {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Dist::Finite(a), Dist::Finite(b)) => a.cmp(b),
            (Dist::Finite(_), Dist::Infinite) => Ordering::Less,
            (Dist::Infinite, Dist::Finite(_)) => Ordering::Greater,
            (Dist::Infinite, Dist::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Dist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dist::Finite(x) => write!(f, "{x}"),
            Dist::Infinite => f.write_str("inf"),
        }
    }
}

/// A Lipschitz number, kept exactly as its square (`None` is `∞`) because
/// moduli of Gaussian rationals are generally irrational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LipschitzNumber {
    pub squared: Option<BigRational>,
}

impl LipschitzNumber {
    pub fn zero() -> Self {
        LipschitzNumber {
            squared: Some(BigRational::zero()),
        }
    }

    /// `num / den` for a numerator given by its square, with the conventions
    /// `0/0 = 0`, `x/0 = ∞` and `x/∞ = 0`.
    pub fn ratio(num_squared: &BigRational, den: &Dist) -> Self {
        let squared = if num_squared.is_zero() {
            Some(BigRational::zero())
        } else {
            match den {
                Dist::Infinite => Some(BigRational::zero()),
                Dist::Finite(d) if d.is_zero() => None,
                Dist::Finite(d) => Some(num_squared / (d * d)),
            }
        };
        LipschitzNumber { squared }
    }

    pub fn is_finite(&self) -> bool {
        self.squared.is_some()
    }

    pub fn value(&self) -> f64 {
        match &self.squared {
            Some(s) => s.to_f64().unwrap_or(f64::NAN).sqrt(),
            None => f64::INFINITY,
        }
    }

    /// Whether the number is at most `c ≥ 0`.
    pub fn at_most(&self, c: &BigRational) -> bool {
        matches!(&self.squared, Some(s) if *s <= c * c)
    }
}

impl PartialOrd for LipschitzNumber {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for LipschitzNumber {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.squared, &other.squared) {
            (Some(a), Some(b)) => a.cmp(b),
            (Some(_), None) => Ordering::Less,
            (None, Some(_)) => Ordering::Greater,
            (None, None) => Ordering::Equal,
        }
    }
}

/// A pseudometric on a finite set, possibly taking the value `∞`.
///
/// Distances between nonempty subsets are minima over atom pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinPseudometric {
    d: Vec<Vec<Dist>>,
}

impl FinPseudometric {
    pub fn new(d: Vec<Vec<Dist>>) -> Result<Self> {
        let n = d.len();
        super::check_size(n)?;
        if d.iter().any(|row| row.len() != n) {
            return Err(Error::Invalid("distance matrix is not square".into()));
        }
        for x in 0..n {
            if !d[x][x].is_zero() {
                return Err(Error::validation(
                    "distance from a point to itself is not zero",
                    json!({"x": x, "d": d[x][x].to_string()}),
                ));
            }
            for y in 0..n {
                if let Dist::Finite(v) = &d[x][y] {
                    if v.is_negative() {
                        return Err(Error::validation(
                            "negative distance",
                            json!({"x": x, "y": y, "d": v.to_string()}),
                        ));
                    }
                }
                if d[x][y] != d[y][x] {
                    return Err(Error::validation(
                        "distance matrix is not symmetric",
                        json!({"x": x, "y": y}),
                    ));
                }
                for z in 0..n {
                    if d[x][z] > d[x][y].add(&d[y][z]) {
                        return Err(Error::validation(
                            "triangle inequality fails",
                            json!({"x": x, "y": y, "z": z}),
                        ));
                    }
                }
            }
        }
        Ok(FinPseudometric { d })
    }

    pub fn size(&self) -> usize {
        self.d.len()
    }

    pub fn dist(&self, x: usize, y: usize) -> &Dist {
        &self.d[x][y]
    }

    pub fn matrix(&self) -> &[Vec<Dist>] {
        &self.d
    }

    /// `ρ(S, T) = min_{x∈S, y∈T} d(x, y)`.
    pub fn rho(&self, s: Subset, t: Subset) -> Result<Dist> {
        if s == 0 || t == 0 {
            return Err(Error::EmptySubset);
        }
        Ok(elements(s)
            .flat_map(|x| elements(t).map(move |y| (x, y)))
            .map(|(x, y)| self.d[x][y].clone())
            .min()
            .expect("nonempty subsets"))
    }

    /// `R_t = {(S, T) : ρ(S, T) < t}`, a reflexive symmetric relation.
    pub fn relation_at(&self, t: &BigRational) -> Result<MeasurableRelation> {
        if !t.is_positive() {
            return Err(Error::Invalid(format!("threshold {t} must be positive")));
        }
        let n = self.size();
        let bound = Dist::Finite(t.clone());
        let mut rel = FiniteRelation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if self.d[x][y] < bound {
                    rel.insert(x, y);
                }
            }
        }
        debug_assert!(rel.is_reflexive() && rel.is_symmetric());
        Ok(MeasurableRelation::from_relation(rel))
    }

    /// Lipschitz number of `f : X → ℂ`, the supremum over nonempty `S, T`
    /// of `dist(f(S), f(T)) / ρ(S, T)`.
    ///
    /// The supremum is attained on a pair of atoms: if `(x, y)` minimizes
    /// `d` over `S × T` then `dist(f(S), f(T)) ≤ |f(x) − f(y)|`.
    pub fn lipschitz(&self, f: &[GaussRat]) -> Result<LipschitzNumber> {
        let n = self.size();
        if f.len() != n {
            return Err(Error::DimensionMismatch(f.len(), n));
        }
        let mut best = LipschitzNumber::zero();
        for x in 0..n {
            for y in x + 1..n {
                let num = f[x].sub(&f[y]).norm_sqr().re;
                let r = LipschitzNumber::ratio(&num, &self.d[x][y]);
                if r > best {
                    best = r;
                }
            }
        }
        Ok(best)
    }

    /// `x ↦ min{d(x, r), c}`.
    pub fn distance_function(&self, r: Subset, c: &BigRational) -> Result<Vec<BigRational>> {
        if r == 0 {
            return Err(Error::EmptySubset);
        }
        if !c.is_positive() {
            return Err(Error::Invalid(format!("cap {c} must be positive")));
        }
        (0..self.size())
            .map(|x| {
                Ok(match self.rho(1 << x, r)? {
                    Dist::Finite(v) if v < *c => v,
                    _ => c.clone(),
                })
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line3() -> FinPseudometric {
        let d = |v: [i64; 3]| v.iter().map(|&x| Dist::from_int(x)).collect::<Vec<_>>();
        FinPseudometric::new(vec![d([0, 1, 2]), d([1, 0, 1]), d([2, 1, 0])]).unwrap()
    }

    fn reals(xs: &[i64]) -> Vec<GaussRat> {
        xs.iter().map(|&x| GaussRat::from_ints(x, 0)).collect()
    }

    #[test]
    fn lipschitz_examples() {
        let two = FinPseudometric::new(vec![
            vec![Dist::zero(), Dist::from_int(1)],
            vec![Dist::from_int(1), Dist::zero()],
        ])
        .unwrap();
        assert_eq!(two.lipschitz(&reals(&[0, 1])).unwrap().value(), 1.0);
        assert_eq!(two.lipschitz(&reals(&[5, 5])).unwrap(), LipschitzNumber::zero());
        assert_eq!(line3().lipschitz(&reals(&[0, 2, 2])).unwrap().value(), 2.0);
    }

    #[test]
    fn conventions_for_zero_and_infinite_distances() {
        let m = FinPseudometric::new(vec![
            vec![Dist::zero(), Dist::zero(), Dist::Infinite],
            vec![Dist::zero(), Dist::zero(), Dist::Infinite],
            vec![Dist::Infinite, Dist::Infinite, Dist::zero()],
        ])
        .unwrap();
        assert!(!m.lipschitz(&reals(&[0, 1, 0])).unwrap().is_finite());
        assert_eq!(m.lipschitz(&reals(&[0, 0, 9])).unwrap(), LipschitzNumber::zero());
    }

    #[test]
    fn invalid_metrics_are_rejected() {
        let d = |v: [i64; 3]| v.iter().map(|&x| Dist::from_int(x)).collect::<Vec<_>>();
        assert!(FinPseudometric::new(vec![d([0, 1, 5]), d([1, 0, 1]), d([5, 1, 0])]).is_err());
        assert!(FinPseudometric::new(vec![d([0, 1, 2]), d([2, 0, 1]), d([2, 1, 0])]).is_err());
    }

    #[test]
    fn distance_function_is_capped() {
        let f = line3()
            .distance_function(0b001, &BigRational::from_integer(1.into()))
            .unwrap();
        assert_eq!(f, vec![0.into(), 1.into(), 1.into()].into_iter().map(BigRational::from_integer).collect::<Vec<_>>());
    }

    #[test]
    fn threshold_relations() {
        let r = line3().relation_at(&BigRational::from_integer(2.into())).unwrap();
        assert!(r.underlying().contains(0, 1));
        assert!(!r.underlying().contains(0, 2));
    }
}
