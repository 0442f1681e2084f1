//! Relations on finite sets and their measurable counterparts.
//!
//! With counting measure every projection of `L∞(X)` is the indicator of a
//! subset, so projections are stored as `u64` bitmasks and a measurable
//! relation is determined by its underlying classical relation. The
//! subset-pair predicate [`MeasurableRelation::member`] is nonetheless the
//! public interface.

mod filter;
mod lattice;
mod metric;
mod relation;

pub use filter::filter_to_support;
pub use lattice::SubsetLattice;
pub use metric::{Dist, FinPseudometric, LipschitzNumber};
pub use relation::{FiniteRelation, MeasurableRelation};

use num_rational::BigRational;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// A subset of `{0, …, n−1}` as a bitmask.
pub type Subset = u64;

/// Largest base set the bitmask representation supports.
pub const MAX_ATOMS: usize = 64;

/// Largest base set for which routines enumerate all subsets.
pub const MAX_ENUMERATED_ATOMS: usize = 16;

pub fn full_set(n: usize) -> Subset {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

pub fn singleton(x: usize) -> Subset {
    1u64 << x
}

pub fn complement(n: usize, s: Subset) -> Subset {
    full_set(n) & !s
}

/// Every subset of an `n`-element set, the empty one first.
pub fn all_subsets(n: usize) -> impl Iterator<Item = Subset> {
    assert!(n <= MAX_ENUMERATED_ATOMS, "refusing to enumerate 2^{n} subsets");
    0..=full_set(n)
}

pub fn nonempty_subsets(n: usize) -> impl Iterator<Item = Subset> {
    all_subsets(n).skip(1)
}

/// Nonempty subsets of `s`.
pub fn nonempty_submasks(s: Subset) -> impl Iterator<Item = Subset> {
    let mut next = Some(s);
    std::iter::from_fn(move || {
        let cur = next.filter(|&c| c != 0)?;
        next = Some((cur - 1) & s);
        Some(cur)
    })
}

/// Elements of `s` in increasing order.
pub fn elements(s: Subset) -> impl Iterator<Item = usize> {
    let mut rest = s;
    std::iter::from_fn(move || {
        if rest == 0 {
            return None;
        }
        let i = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        Some(i)
    })
}

pub fn subset_from_indices(indices: &[usize]) -> Subset {
    indices.iter().fold(0, |s, &i| s | singleton(i))
}

pub(crate) fn check_size(n: usize) -> Result<()> {
    if n > MAX_ATOMS {
        return Err(Error::GuardExceeded(format!(
            "{n} atoms exceed the limit of {MAX_ATOMS}"
        )));
    }
    Ok(())
}

pub(crate) fn check_enumerable(n: usize) -> Result<()> {
    if n > MAX_ENUMERATED_ATOMS {
        return Err(Error::GuardExceeded(format!(
            "{n} atoms exceed the enumeration limit of {MAX_ENUMERATED_ATOMS}"
        )));
    }
    Ok(())
}

/// A finite set with atom labels and positive weights.
///
/// Weights describe the atomic measure; relation logic never reads them
/// because the only null set is the empty one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinSet {
    labels: Vec<String>,
    weights: Vec<BigRational>,
}

impl FinSet {
    /// Atoms labelled `0, 1, …` with unit weights.
    pub fn counting(n: usize) -> Self {
        FinSet {
            labels: (0..n).map(|i| i.to_string()).collect(),
            weights: vec![BigRational::one(); n],
        }
    }

    pub fn new(labels: Vec<String>, weights: Vec<BigRational>) -> Result<Self> {
        check_size(labels.len())?;
        if labels.len() != weights.len() {
            return Err(Error::Invalid(format!(
                "{} labels but {} weights",
                labels.len(),
                weights.len()
            )));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[..i].contains(a) {
                return Err(Error::Invalid(format!("duplicate atom label {a:?}")));
            }
        }
        if let Some(w) = weights.iter().find(|w| !w.is_positive()) {
            return Err(Error::Invalid(format!("nonpositive weight {w}")));
        }
        Ok(FinSet { labels, weights })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.weights
    }
}
