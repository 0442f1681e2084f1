mod common;

use common::*;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;
use qrel::finite::{
    all_subsets, elements, nonempty_submasks, nonempty_subsets, singleton, FiniteRelation, MeasurableRelation,
    SubsetLattice,
};
use qrel::{GaussRat, Scalar};
use rand::Rng;

fn relation(seed: u64, max: usize) -> FiniteRelation {
    let mut g = rng(seed);
    let n = g.gen_range(1..=max);
    random_finite_relation(&mut g, n)
}

/// Reflexive transitive closure by Warshall's algorithm.
fn preorder_closure(r: &FiniteRelation) -> FiniteRelation {
    let n = r.size();
    let mut m = r.union(&FiniteRelation::diagonal(n)).unwrap();
    for k in 0..n {
        for x in 0..n {
            for y in 0..n {
                if m.contains(x, k) && m.contains(k, y) {
                    m.insert(x, y);
                }
            }
        }
    }
    m
}

fn half(k: i64) -> BigRational {
    BigRational::new(k.into(), 2.into())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// `(⋁ p_i, ⋁ q_j) ∈ R` iff some `(p_i, q_j) ∈ R`, over all pairs of
    /// two-element families.
    #[test]
    fn join_axiom_holds(seed in any::<u64>()) {
        let r = MeasurableRelation::from_relation(relation(seed, 4));
        let n = r.size();
        let subsets: Vec<u64> = nonempty_subsets(n).collect();
        for &p1 in &subsets {
            for &p2 in &subsets {
                for &q1 in &subsets {
                    for &q2 in &subsets {
                        let some = [p1, p2].iter().any(|&p| [q1, q2].iter().any(|&q| r.relates(p, q)));
                        prop_assert_eq!(r.relates(p1 | p2, q1 | q2), some);
                    }
                }
            }
        }
    }

    #[test]
    fn product_conditions_agree(a in any::<u64>(), b in any::<u64>()) {
        let mut g = rng(a);
        let n = g.gen_range(1..=4);
        let r = MeasurableRelation::from_relation(random_finite_relation(&mut g, n));
        let s = MeasurableRelation::from_relation(random_finite_relation(&mut rng(b), n));
        let prod = r.product(&s).unwrap();
        for p in nonempty_subsets(n) {
            for q in nonempty_subsets(n) {
                prop_assert_eq!(r.product_condition_one(&s, p, q), prod.relates(p, q));
                prop_assert_eq!(r.product_condition_two(&s, p, q), prod.relates(p, q));
            }
        }
    }

    #[test]
    fn predicate_round_trip(seed in any::<u64>()) {
        let r = MeasurableRelation::from_relation(relation(seed, 4));
        let back = MeasurableRelation::from_predicate(r.size(), |p, q| r.relates(p, q)).unwrap();
        prop_assert_eq!(back, r);
    }

    #[test]
    fn phi_preserves_joins_and_round_trips(seed in any::<u64>()) {
        let r = MeasurableRelation::from_relation(relation(seed, 5));
        let n = r.size();
        prop_assert_eq!(r.phi(0), 0);
        for a in all_subsets(n) {
            for b in all_subsets(n) {
                prop_assert_eq!(r.phi(a | b), r.phi(a) | r.phi(b));
            }
        }
        let table = r.phi_table().unwrap();
        let back = MeasurableRelation::from_phi(n, &table).unwrap();
        prop_assert_eq!(back.phi_table().unwrap(), table);
        prop_assert_eq!(back, r);
    }

    #[test]
    fn transpose_and_product_laws(a in any::<u64>(), b in any::<u64>()) {
        let mut g = rng(a);
        let n = g.gen_range(1..=5);
        let r = random_finite_relation(&mut g, n);
        let s = random_finite_relation(&mut rng(b), n);
        prop_assert_eq!(r.transpose().transpose(), r.clone());
        prop_assert_eq!(
            r.compose(&s).unwrap().transpose(),
            s.transpose().compose(&r.transpose()).unwrap()
        );
        let d = FiniteRelation::diagonal(n);
        prop_assert_eq!(r.compose(&d).unwrap(), r.clone());
        prop_assert_eq!(d.compose(&r).unwrap(), r);
    }

    #[test]
    fn reduce_finds_a_hereditary_pair(seed in any::<u64>()) {
        let r = MeasurableRelation::from_relation(relation(seed, 4));
        let n = r.size();
        for p in nonempty_subsets(n) {
            for q in nonempty_subsets(n) {
                if !r.relates(p, q) {
                    prop_assert!(r.reduce(p, q).is_err());
                    continue;
                }
                let (p1, q1) = r.reduce(p, q).unwrap();
                prop_assert!(p1 != 0 && q1 != 0 && p1 & !p == 0 && q1 & !q == 0);
                for p2 in nonempty_submasks(p1) {
                    prop_assert!(r.relates(p2, q1));
                }
                for q2 in nonempty_submasks(q1) {
                    prop_assert!(r.relates(p1, q2));
                }
            }
        }
    }

    #[test]
    fn lattice_of_a_preorder_is_a_sublattice(seed in any::<u64>()) {
        let r = preorder_closure(&relation(seed, 5));
        let n = r.size();
        let mr = MeasurableRelation::from_relation(r.clone());
        let l = SubsetLattice::of_preorder(&mr).unwrap();
        let full = (1u64 << n) - 1;
        prop_assert!(l.contains(0) && l.contains(full));
        let members: Vec<u64> = l.members().collect();
        for &a in &members {
            for &b in &members {
                prop_assert!(l.contains(a | b) && l.contains(a & b));
            }
        }
        prop_assert_eq!(l.to_preorder(), mr);
        prop_assert_eq!(SubsetLattice::new(n, members).unwrap(), l.clone());
        prop_assert_eq!(l.is_boolean(), r.is_symmetric());
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(l.relates(singleton(x), singleton(y)), r.contains(x, y));
            }
        }
    }

    /// Pulling back along `g` agrees with the classical image of the
    /// relation under `g`.
    #[test]
    fn pullback_is_classical_image(seed in any::<u64>()) {
        let mut g = rng(seed);
        let n = g.gen_range(1..=4);
        let target = g.gen_range(1..=4);
        let f: Vec<usize> = (0..n).map(|_| g.gen_range(0..target)).collect();
        let r = random_finite_relation(&mut g, n);
        let pushed = r.pushforward(&f, target).unwrap();
        for a in 0..target {
            for b in 0..target {
                let hit = (0..n).any(|x| (0..n).any(|y| f[x] == a && f[y] == b && r.contains(x, y)));
                prop_assert_eq!(pushed.contains(a, b), hit);
            }
        }
        let pulled = MeasurableRelation::from_relation(r).pullback(&f, target).unwrap();
        prop_assert_eq!(pulled, MeasurableRelation::from_relation(pushed));
    }

    #[test]
    fn metric_relations_compose_and_distance_functions_are_contractive(seed in any::<u64>()) {
        let mut g = rng(seed);
        let n = g.gen_range(1..=4);
        let m = random_pseudometric(&mut g, n);
        let s = half(g.gen_range(1..=8));
        let t = half(g.gen_range(1..=8));
        let rs = m.relation_at(&s).unwrap();
        let rt = m.relation_at(&t).unwrap();
        prop_assert!(rs.product(&rt).unwrap().is_subset_of(&m.relation_at(&(&s + &t)).unwrap()));
        prop_assert!(rs.is_reflexive() && rs.is_symmetric());
        let r = g.gen_range(1..1u64 << n);
        let c = half(g.gen_range(1..=8));
        let h: Vec<GaussRat> = m.distance_function(r, &c).unwrap().into_iter().map(GaussRat::real).collect();
        prop_assert!(m.lipschitz(&h).unwrap().at_most(&BigRational::one()));
        for x in elements(r) {
            prop_assert!(h[x].is_zero());
        }
    }
}
