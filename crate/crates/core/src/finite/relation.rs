use serde_json::json;

use super::{
    all_subsets, check_enumerable, check_size, complement, elements, full_set, nonempty_submasks,
    nonempty_subsets, singleton, Subset,
};
use crate::class::RelationClass;
use crate::error::{Error, Result};

/// A classical relation `R ⊆ X × X` on `X = {0, …, n−1}`.
///
/// Row `x` holds the set of `y` with `(x, y) ∈ R`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteRelation {
    n: usize,
    rows: Vec<Subset>,
}

impl FiniteRelation {
    pub fn empty(n: usize) -> Self {
        check_size(n).expect("base set size");
        FiniteRelation {
            n,
            rows: vec![0; n],
        }
    }

    pub fn diagonal(n: usize) -> Self {
        let mut r = Self::empty(n);
        for x in 0..n {
            r.rows[x] = singleton(x);
        }
        r
    }

    pub fn full(n: usize) -> Self {
        FiniteRelation {
            n,
            rows: vec![full_set(n); n],
        }
    }

    pub fn from_pairs(n: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        check_size(n)?;
        let mut r = Self::empty(n);
        for &(x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::validation(
                    format!("pair ({x}, {y}) lies outside a {n}-point set"),
                    json!([x, y]),
                ));
            }
            r.rows[x] |= singleton(y);
        }
        Ok(r)
    }

    pub fn from_rows(n: usize, rows: Vec<Subset>) -> Result<Self> {
        check_size(n)?;
        if rows.len() != n || rows.iter().any(|&r| r & !full_set(n) != 0) {
            return Err(Error::Invalid("relation rows do not fit the base set".into()));
        }
        Ok(FiniteRelation { n, rows })
    }

    /// The relation whose pairs are the set bits of `code`, row-major.
    pub fn from_code(n: usize, code: u64) -> Self {
        assert!(n * n <= 64, "code too short for {n} atoms");
        let rows = (0..n).map(|x| (code >> (x * n)) & full_set(n)).collect();
        FiniteRelation { n, rows }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Subset] {
        &self.rows
    }

    /// Set of `y` with `(x, y) ∈ R`.
    pub fn successors(&self, x: usize) -> Subset {
        self.rows[x]
    }

    /// Set of `x` with `(x, y) ∈ R`.
    pub fn predecessors(&self, y: usize) -> Subset {
        (0..self.n)
            .filter(|&x| self.rows[x] & singleton(y) != 0)
            .fold(0, |s, x| s | singleton(x))
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.rows[x] & singleton(y) != 0
    }

    pub fn insert(&mut self, x: usize, y: usize) {
        self.rows[x] |= singleton(y);
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        (0..self.n)
            .flat_map(|x| elements(self.rows[x]).map(move |y| (x, y)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    fn check_base(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::BaseMismatch(self.n, other.n));
        }
        Ok(())
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.n == other.n && self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::empty(self.n);
        for (x, y) in self.pairs() {
            t.rows[y] |= singleton(x);
        }
        t
    }

    /// Classical composition `{(x, z) : (x, y) ∈ self, (y, z) ∈ other}`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let rows = self
            .rows
            .iter()
            .map(|&r| elements(r).fold(0, |acc, y| acc | other.rows[y]))
            .collect();
        Ok(FiniteRelation { n: self.n, rows })
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect();
        Ok(FiniteRelation { n: self.n, rows })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check_base(other)?;
        let rows = self.rows.iter().zip(&other.rows).map(|(a, b)| a & b).collect();
        Ok(FiniteRelation { n: self.n, rows })
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.n).all(|x| self.contains(x, x))
    }

    pub fn is_symmetric(&self) -> bool {
        self.transpose() == *self
    }

    pub fn is_antisymmetric(&self) -> bool {
        let both = self.intersection(&self.transpose()).expect("same base");
        both.is_subset_of(&Self::diagonal(self.n))
    }

    pub fn is_transitive(&self) -> bool {
        self.compose(self).expect("same base").is_subset_of(self)
    }

    pub fn classify(&self) -> RelationClass {
        RelationClass::from_flags(
            self.is_reflexive(),
            self.is_symmetric(),
            self.is_antisymmetric(),
            self.is_transitive(),
        )
    }

    /// `f_*(R) = {(f(x), f(y)) : (x, y) ∈ R}` for `f : X → Y`, `|Y| = target`.
    pub fn pushforward(&self, f: &[usize], target: usize) -> Result<Self> {
        check_map(f, self.n, target)?;
        let mut out = Self::empty(target);
        for (x, y) in self.pairs() {
            out.insert(f[x], f[y]);
        }
        Ok(out)
    }
}

fn check_map(f: &[usize], domain: usize, codomain: usize) -> Result<()> {
    if f.len() != domain {
        return Err(Error::Invalid(format!(
            "map defined on {} points, expected {domain}",
            f.len()
        )));
    }
    if let Some((x, &fx)) = f.iter().enumerate().find(|(_, &fx)| fx >= codomain) {
        return Err(Error::validation(
            format!("map sends {x} to {fx}, outside a {codomain}-point set"),
            json!([x, fx]),
        ));
    }
    Ok(())
}

fn subset_json(s: Subset) -> serde_json::Value {
    json!(elements(s).collect::<Vec<_>>())
}

/// A measurable relation on a finite set with counting measure: a family of
/// pairs of nonempty subsets closed under the join axiom.
///
/// Stored through its underlying classical relation; `(S, T)` is a member
/// iff `(S × T) ∩ R ≠ ∅`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeasurableRelation {
    rel: FiniteRelation,
}

impl MeasurableRelation {
    pub fn from_relation(rel: FiniteRelation) -> Self {
        MeasurableRelation { rel }
    }

    pub fn to_relation(&self) -> FiniteRelation {
        self.rel.clone()
    }

    pub fn underlying(&self) -> &FiniteRelation {
        &self.rel
    }

    pub fn size(&self) -> usize {
        self.rel.n
    }

    /// Builds a measurable relation from an arbitrary predicate on pairs of
    /// nonempty subsets, rejecting predicates that violate the join axiom.
    ///
    /// On a finite Boolean algebra the axiom is equivalent to monotonicity
    /// in both slots together with decomposition into atoms: a member pair
    /// contains a related pair of points.
    pub fn from_predicate(n: usize, pred: impl Fn(Subset, Subset) -> bool) -> Result<Self> {
        check_enumerable(n)?;
        let mut rel = FiniteRelation::empty(n);
        for x in 0..n {
            for y in 0..n {
                if pred(singleton(x), singleton(y)) {
                    rel.insert(x, y);
                }
            }
        }
        for s in nonempty_subsets(n) {
            for t in nonempty_subsets(n) {
                let inside = pred(s, t);
                if inside {
                    for x in elements(complement(n, s)) {
                        if !pred(s | singleton(x), t) {
                            return Err(monotone_witness(s, t, s | singleton(x), t));
                        }
                    }
                    for y in elements(complement(n, t)) {
                        if !pred(s, t | singleton(y)) {
                            return Err(monotone_witness(s, t, s, t | singleton(y)));
                        }
                    }
                }
                let atomic = elements(s).any(|x| rel.rows[x] & t != 0);
                if inside && !atomic {
                    return Err(Error::validation(
                        "join axiom fails: a member pair has no related atoms",
                        json!({"p": subset_json(s), "q": subset_json(t)}),
                    ));
                }
            }
        }
        Ok(MeasurableRelation { rel })
    }

    /// `(S × T) ∩ R ≠ ∅`; pairs involving the empty set are never members.
    pub fn relates(&self, s: Subset, t: Subset) -> bool {
        t != 0 && elements(s).any(|x| self.rel.rows[x] & t != 0)
    }

    /// Membership of a pair of nonempty subsets.
    pub fn member(&self, s: Subset, t: Subset) -> Result<bool> {
        if s == 0 || t == 0 {
            return Err(Error::EmptySubset);
        }
        Ok(self.relates(s, t))
    }

    pub fn diagonal(n: usize) -> Self {
        Self::from_relation(FiniteRelation::diagonal(n))
    }

    pub fn transpose(&self) -> Self {
        Self::from_relation(self.rel.transpose())
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_relation(self.rel.union(&other.rel)?))
    }

    /// Greatest measurable relation below both.
    pub fn meet(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_relation(self.rel.intersection(&other.rel)?))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.rel.is_subset_of(&other.rel)
    }

    /// Product of measurable relations, realized by classical composition.
    pub fn product(&self, other: &Self) -> Result<Self> {
        Ok(Self::from_relation(self.rel.compose(&other.rel)?))
    }

    /// First product condition: for every subset `q`, either `(p, q) ∈ self`
    /// or `(X∖q, r) ∈ other`.
    pub fn product_condition_one(&self, other: &Self, p: Subset, r: Subset) -> bool {
        let n = self.size();
        all_subsets(n).all(|q| self.relates(p, q) || other.relates(complement(n, q), r))
    }

    /// Second product condition: some nonempty `q` has `(p, q') ∈ self` and
    /// `(q', r) ∈ other` for every nonempty `q' ⊆ q`.
    pub fn product_condition_two(&self, other: &Self, p: Subset, r: Subset) -> bool {
        nonempty_subsets(self.size()).any(|q| {
            nonempty_submasks(q).all(|q2| self.relates(p, q2) && other.relates(q2, r))
        })
    }

    pub fn is_reflexive(&self) -> bool {
        self.rel.is_reflexive()
    }

    pub fn is_symmetric(&self) -> bool {
        self.rel.is_symmetric()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.rel.is_antisymmetric()
    }

    pub fn is_transitive(&self) -> bool {
        self.rel.is_transitive()
    }

    pub fn classify(&self) -> RelationClass {
        self.rel.classify()
    }

    /// `φ_R(q) = X ∖ ⋃{p : (p, q) ∉ R}`, the set of points related into `q`.
    pub fn phi(&self, q: Subset) -> Subset {
        (0..self.size())
            .filter(|&x| self.rel.rows[x] & q != 0)
            .fold(0, |s, x| s | singleton(x))
    }

    /// Table of `φ_R` indexed by subset bitmask.
    pub fn phi_table(&self) -> Result<Vec<Subset>> {
        check_enumerable(self.size())?;
        Ok(all_subsets(self.size()).map(|q| self.phi(q)).collect())
    }

    /// Inverse of [`MeasurableRelation::phi_table`]: `R_φ = {(p, q) : p ∩ φ(q) ≠ ∅}`.
    pub fn from_phi(n: usize, table: &[Subset]) -> Result<Self> {
        check_enumerable(n)?;
        if table.len() != 1 << n {
            return Err(Error::Invalid(format!(
                "a map on subsets of {n} points needs {} entries, got {}",
                1u64 << n,
                table.len()
            )));
        }
        if table[0] != 0 {
            return Err(Error::validation(
                "the map does not send the empty set to the empty set",
                json!({"phi_of_empty": subset_json(table[0])}),
            ));
        }
        for s in nonempty_subsets(n) {
            if table[s as usize] & !full_set(n) != 0 {
                return Err(Error::Invalid(format!("image of subset {s:#b} is out of range")));
            }
            let joined = elements(s).fold(0, |acc, y| acc | table[singleton(y) as usize]);
            if table[s as usize] != joined {
                return Err(Error::validation(
                    "the map does not preserve joins",
                    json!({
                        "q": subset_json(s),
                        "phi_of_q": subset_json(table[s as usize]),
                        "join_of_images": subset_json(joined),
                    }),
                ));
            }
        }
        let mut rel = FiniteRelation::empty(n);
        for y in 0..n {
            for x in elements(table[singleton(y) as usize]) {
                rel.insert(x, y);
            }
        }
        Ok(Self::from_relation(rel))
    }

    /// `φ*(R)` on `X` for the homomorphism `L∞(X) → L∞(Y)`, `f ↦ f ∘ g`.
    ///
    /// `self` lives on `Y`, `g : Y → X` and `|X| = target`. A pair `(S, T)`
    /// belongs to the result iff `(g⁻¹(S), g⁻¹(T)) ∈ self`.
    pub fn pullback(&self, g: &[usize], target: usize) -> Result<Self> {
        check_map(g, self.size(), target)?;
        let preimage = |x: usize| {
            g.iter()
                .enumerate()
                .filter(|(_, &gy)| gy == x)
                .fold(0, |s, (y, _)| s | singleton(y))
        };
        let pre: Vec<Subset> = (0..target).map(preimage).collect();
        let mut rel = FiniteRelation::empty(target);
        for x in 0..target {
            for x2 in 0..target {
                if self.relates(pre[x], pre[x2]) {
                    rel.insert(x, x2);
                }
            }
        }
        Ok(Self::from_relation(rel))
    }

    /// Shrinks a member pair `(p, q)` to `(p', q')` such that `(p', q'')` and
    /// `(p'', q')` are members for all nonempty `p'' ⊆ p'`, `q'' ⊆ q'`.
    pub fn reduce(&self, p: Subset, q: Subset) -> Result<(Subset, Subset)> {
        if !self.member(p, q)? {
            return Err(Error::validation(
                "the pair is not a member of the relation",
                json!({"p": subset_json(p), "q": subset_json(q)}),
            ));
        }
        let r = std::iter::once(0)
            .chain(nonempty_submasks(p))
            .filter(|&r2| !self.relates(r2, q))
            .fold(0, |a, b| a | b);
        let s = std::iter::once(0)
            .chain(nonempty_submasks(q))
            .filter(|&s2| !self.relates(p, s2))
            .fold(0, |a, b| a | b);
        Ok((p & !r, q & !s))
    }
}

fn monotone_witness(p: Subset, q: Subset, p2: Subset, q2: Subset) -> Error {
    Error::validation(
        "join axiom fails: membership is not inherited by larger subsets",
        json!({
            "member": {"p": subset_json(p), "q": subset_json(q)},
            "non_member": {"p": subset_json(p2), "q": subset_json(q2)},
        }),
    )
}
