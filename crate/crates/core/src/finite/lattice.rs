use std::collections::BTreeSet;

use serde_json::json;

use super::{
    all_subsets, check_enumerable, complement, elements, full_set, singleton, FiniteRelation,
    MeasurableRelation, Subset,
};
use crate::error::{Error, Result};

fn subset_json(s: Subset) -> serde_json::Value {
    json!(elements(s).collect::<Vec<_>>())
}

/// A 0,1-sublattice of the Boolean algebra of subsets of a finite set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetLattice {
    n: usize,
    members: BTreeSet<Subset>,
}

impl SubsetLattice {
    /// Validates that `members` contains `∅` and `X` and is closed under
    /// union and intersection.
    pub fn new(n: usize, members: impl IntoIterator<Item = Subset>) -> Result<Self> {
        check_enumerable(n)?;
        let members: BTreeSet<Subset> = members.into_iter().collect();
        if let Some(&s) = members.iter().find(|&&s| s & !full_set(n) != 0) {
            return Err(Error::Invalid(format!("subset {s:#b} is out of range")));
        }
        for required in [0, full_set(n)] {
            if !members.contains(&required) {
                return Err(Error::validation(
                    "the lattice must contain the empty set and the whole set",
                    json!({"missing": subset_json(required)}),
                ));
            }
        }
        for &a in &members {
            for &b in &members {
                for (op, c) in [("union", a | b), ("intersection", a & b)] {
                    if !members.contains(&c) {
                        return Err(Error::validation(
                            format!("the family is not closed under {op}"),
                            json!({"a": subset_json(a), "b": subset_json(b), "missing": subset_json(c)}),
                        ));
                    }
                }
            }
        }
        Ok(SubsetLattice { n, members })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.contains(&s)
    }

    /// Closed under complement, i.e. a Boolean subalgebra.
    pub fn is_boolean(&self) -> bool {
        self.members.iter().all(|&s| self.contains(complement(self.n, s)))
    }

    /// Lower sets of a measurable preorder: `{S : (X∖S, S) ∉ R}`.
    pub fn of_preorder(r: &MeasurableRelation) -> Result<Self> {
        let n = r.size();
        check_enumerable(n)?;
        if let Some(x) = (0..n).find(|&x| !r.underlying().contains(x, x)) {
            return Err(Error::validation(
                "the relation is not reflexive",
                json!({"missing_pair": [x, x]}),
            ));
        }
        let square = r.underlying().compose(r.underlying())?;
        if let Some(&(x, z)) = square.pairs().iter().find(|&&(x, z)| !r.underlying().contains(x, z)) {
            return Err(Error::validation(
                "the relation is not transitive",
                json!({"missing_pair": [x, z]}),
            ));
        }
        let members = all_subsets(n).filter(|&s| !r.relates(complement(n, s), s));
        Self::new(n, members)
    }

    /// `(p, q) ∈ R_L` iff `p` meets every member of `L` containing `q`.
    pub fn relates(&self, p: Subset, q: Subset) -> bool {
        p != 0
            && q != 0
            && self
                .members
                .iter()
                .filter(|&&s| q & !s == 0)
                .all(|&s| p & s != 0)
    }

    /// The measurable preorder `R_L` whose lower sets are this lattice.
    pub fn to_preorder(&self) -> MeasurableRelation {
        let mut rel = FiniteRelation::empty(self.n);
        for x in 0..self.n {
            for y in 0..self.n {
                if self.relates(singleton(x), singleton(y)) {
                    rel.insert(x, y);
                }
            }
        }
        MeasurableRelation::from_relation(rel)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::nonempty_subsets;

    #[test]
    fn diagonal_gives_the_boolean_algebra() {
        let l = SubsetLattice::of_preorder(&MeasurableRelation::diagonal(2)).unwrap();
        assert_eq!(l.len(), 4);
        assert!(l.is_boolean());
    }

    #[test]
    fn trivial_lattice_gives_the_full_relation() {
        let l = SubsetLattice::new(2, [0, 0b11]).unwrap();
        assert_eq!(l.to_preorder().to_relation(), FiniteRelation::full(2));
    }

    #[test]
    fn chain_round_trip() {
        let r = MeasurableRelation::from_relation(
            FiniteRelation::from_pairs(2, &[(0, 0), (1, 1), (0, 1)]).unwrap(),
        );
        let l = SubsetLattice::of_preorder(&r).unwrap();
        // Lower sets: ∅, {0}, X.
        assert_eq!(l.members().collect::<Vec<_>>(), vec![0, 0b01, 0b11]);
        assert_eq!(l.to_preorder(), r);
        for p in nonempty_subsets(2) {
            for q in nonempty_subsets(2) {
                assert_eq!(l.relates(p, q), r.relates(p, q));
            }
        }
    }

    #[test]
    fn invalid_inputs_are_rejected() {
        assert!(SubsetLattice::new(2, [0, 0b01, 0b10, 0b11 & 0b10]).is_err());
        let not_transitive = MeasurableRelation::from_relation(
            FiniteRelation::from_pairs(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]).unwrap(),
        );
        assert!(SubsetLattice::of_preorder(&not_transitive).is_err());
    }
}
