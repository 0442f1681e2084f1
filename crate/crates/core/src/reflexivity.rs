//! Operator reflexivity of subspaces of `M_n`.
//!
//! `V` is operator reflexive when `Bv ∈ Vv` for every vector `v` forces
//! `B ∈ V`. The reflexive closure is approximated from above by
//! intersecting the constraint sets `{B : Bv ∈ Vv}` over sampled vectors.
//! Each constraint is sound, so the sampled closure always contains the
//! true closure; it can only overshoot when the sample misses the special
//! vectors at which `Vv` drops dimension.
//!
//! Before sampling, the closure is cut down to the `*`-algebra generated by
//! `V`: every projection commuting with `V` and `V*` has a range invariant
//! under `V`, hence under every `B` in the closure, so `B` lies in the
//! double commutant of `V ∪ V*`. This settles algebras exactly, whose
//! special vectors lie on invariant subspaces a random sample never hits.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::star_algebra_span;
use crate::error::{Error, Result};
use crate::io::{matrix_to_json, subspace_to_json};
use crate::linalg::{kernel, Echelon, Matrix, OperatorSubspace, Scalar};
use crate::par::Exec;

/// Largest `n` for which the masa-relative test enumerates projection pairs.
pub const MAX_MASA_N: usize = 12;

/// Coordinates of random sample vectors are Gaussian integers with real and
/// imaginary parts in `-RANGE..=RANGE`.
const RANGE: i64 = 3;

#[derive(Clone, Copy, Debug)]
pub struct SamplerConfig {
    /// Minimum number of random vectors drawn after the fixed ones.
    pub samples: usize,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            samples: 200,
            seed: 0,
            exec: Exec::default(),
        }
    }
}

impl SamplerConfig {
    pub fn new(samples: usize, seed: u64) -> Self {
        SamplerConfig {
            samples,
            seed,
            ..Self::default()
        }
    }

    pub fn with_exec(self, exec: Exec) -> Self {
        SamplerConfig { exec, ..self }
    }
}

#[derive(Clone, Debug)]
pub struct ReflexivityReport<S: Scalar> {
    pub input: OperatorSubspace<S>,
    pub closure: OperatorSubspace<S>,
    pub is_reflexive: bool,
    /// An element of `closure ∖ input` when the input is not reflexive.
    pub certificate: Option<Matrix<S>>,
    /// Random samples drawn; the fixed basis vectors and pairwise sums are
    /// not counted.
    pub samples_used: usize,
    /// False when the constraints alone pin the closure down to the input.
    pub probabilistic: bool,
    /// Whether the closure passed the check on a fresh batch of vectors.
    pub validated: bool,
}

impl<S: Scalar> ReflexivityReport<S> {
    pub fn to_json(&self) -> Value {
        json!({
            "input": subspace_to_json(&self.input),
            "closure": subspace_to_json(&self.closure),
            "is_reflexive": self.is_reflexive,
            "certificate": self.certificate.as_ref().map(matrix_to_json),
            "samples_used": self.samples_used,
            "probabilistic": self.probabilistic,
            "validated": self.validated,
        })
    }
}

fn require_square<S: Scalar>(v: &OperatorSubspace<S>) -> Result<usize> {
    let (r, c) = v.shape();
    if r != c {
        return Err(Error::ShapeMismatch {
            expected: (r, r),
            found: (r, c),
        });
    }
    Ok(r)
}

/// Linear equations on `vec(B)` expressing `Bv ∈ Vv`: one row `vec(y vᵀ)`
/// for each `y` in the bilinear annihilator of `Vv`.
fn constraints<S: Scalar>(basis: &[Matrix<S>], v: &[S]) -> Vec<Vec<S>> {
    let n = v.len();
    let images: Vec<Vec<S>> = basis.iter().map(|b| b.mul_vec(v)).collect();
    kernel(n, images)
        .into_iter()
        .map(|y| {
            let mut row = Vec::with_capacity(n * n);
            for yi in &y {
                row.extend(v.iter().map(|vj| yi.mul(vj)));
            }
            row
        })
        .collect()
}

/// Vectors `v` with `yᵀBv = 0` for every `B ∈ V`. At these `Vv` misses
/// the direction dual to `y`, which generic vectors never see.
fn dual_vectors<S: Scalar>(basis: &[Matrix<S>], y: &[S]) -> Vec<Vec<S>> {
    let n = y.len();
    let functionals = basis.iter().map(|b| b.transpose().mul_vec(y));
    let ker = kernel(n, functionals);
    let mut out = ker.clone();
    if ker.len() > 1 {
        let mut sum = vec![S::zero(); n];
        for (i, k) in ker.iter().enumerate() {
            let c = S::from_ints(i as i64 + 1, 0);
            sum.iter_mut().zip(k).for_each(|(s, x)| *s = s.add(&c.mul(x)));
        }
        out.push(sum);
    }
    out
}

/// Constraints from `v` itself and from the dual vectors of `y`.
fn sample_constraints<S: Scalar>(basis: &[Matrix<S>], v: &[S], y: &[S]) -> Vec<Vec<S>> {
    let mut rows = constraints(basis, v);
    for w in dual_vectors(basis, y) {
        rows.extend(constraints(basis, &w));
    }
    rows
}

fn fixed_vectors<S: Scalar>(n: usize) -> Vec<Vec<S>> {
    let unit = |i: usize| (0..n).map(|k| if k == i { S::one() } else { S::zero() }).collect::<Vec<S>>();
    let mut out: Vec<Vec<S>> = (0..n).map(unit).collect();
    for i in 0..n {
        for j in i + 1..n {
            let mut v = unit(i);
            v[j] = S::one();
            out.push(v);
        }
    }
    out
}

fn random_vector<S: Scalar>(rng: &mut ChaCha8Rng, n: usize) -> Vec<S> {
    (0..n)
        .map(|_| S::from_ints(rng.gen_range(-RANGE..=RANGE), rng.gen_range(-RANGE..=RANGE)))
        .collect()
}

/// Sampled reflexive closure `∩_v {B : Bv ∈ Vv}`.
///
/// Starts from the `*`-algebra generated by `V`; the fixed vectors
/// (standard basis and pairwise sums) are processed next. Each further sample is a random vector `v` together with the
/// dual vectors of a random `y`; samples are drawn until at least `samples` have been
/// used and the last `2n` left the closure unchanged, or until the closure
/// equals `V`.
pub fn reflexive_closure<S: Scalar>(
    v: &OperatorSubspace<S>,
    cfg: &SamplerConfig,
) -> Result<ReflexivityReport<S>> {
    let n = require_square(v)?;
    let basis = v.basis();
    let target = n * n - v.dim();
    let mut cons = Echelon::<S>::new(n * n);
    let absorb = |cons: &mut Echelon<S>, rows: Vec<Vec<S>>| -> bool {
        let mut changed = false;
        for r in rows {
            changed |= cons.insert(r);
        }
        changed
    };
    let envelope = star_algebra_span(n, &basis);
    absorb(&mut cons, kernel(n * n, envelope.echelon().rows().to_vec()));
    for rows in cfg.exec.map(&fixed_vectors::<S>(n), |x| sample_constraints(&basis, x, x)) {
        absorb(&mut cons, rows);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let window = 2 * n;
    let mut used = 0;
    let mut stable = 0;
    while cons.rank() < target && !(used >= cfg.samples && stable >= window) {
        let batch: Vec<(Vec<S>, Vec<S>)> = (0..window)
            .map(|_| (random_vector(&mut rng, n), random_vector(&mut rng, n)))
            .collect();
        for rows in cfg.exec.map(&batch, |(x, y)| sample_constraints(&basis, x, y)) {
            used += 1;
            if absorb(&mut cons, rows) {
                stable = 0;
            } else {
                stable += 1;
            }
        }
    }
    let exhausted = cons.rank() == target;
    let closure = OperatorSubspace::from_vectors(n, n, cons.nullspace());
    let is_reflexive = closure.dim() == v.dim();
    let certificate = closure.basis().into_iter().find(|b| !v.contains(b));
    let validated = exhausted || {
        let mut fresh = ChaCha8Rng::seed_from_u64(cfg.seed);
        fresh.set_stream(1);
        let batch: Vec<Vec<S>> = (0..window).map(|_| random_vector(&mut fresh, n)).collect();
        let closure_basis = closure.basis();
        cfg.exec
            .map(&batch, |x| {
                let span = Echelon::from_vectors(n, basis.iter().map(|b| b.mul_vec(x)));
                closure_basis.iter().all(|b| span.contains(&b.mul_vec(x)))
            })
            .into_iter()
            .all(|ok| ok)
    };
    Ok(ReflexivityReport {
        input: v.clone(),
        closure,
        is_reflexive,
        certificate,
        samples_used: used,
        probabilistic: !exhausted,
        validated,
    })
}

pub fn is_operator_reflexive<S: Scalar>(v: &OperatorSubspace<S>, cfg: &SamplerConfig) -> Result<bool> {
    Ok(reflexive_closure(v, cfg)?.is_reflexive)
}

/// `{B : PVQ = 0 ⇒ PBQ = 0}` with `P`, `Q` ranging over all diagonal
/// projections. Only the support pattern of `V` matters, so the test is
/// exact in either scalar mode.
pub fn masa_relative_closure<S: Scalar>(v: &OperatorSubspace<S>, exec: Exec) -> Result<OperatorSubspace<S>> {
    let n = require_square(v)?;
    if n > MAX_MASA_N {
        return Err(Error::GuardExceeded(format!(
            "masa-relative reflexivity enumerates 4^n projection pairs; n = {n} exceeds {MAX_MASA_N}"
        )));
    }
    let mut support = vec![0u32; n];
    for row in v.echelon().rows() {
        for (idx, x) in row.iter().enumerate() {
            if !x.is_zero() {
                support[idx / n] |= 1 << (idx % n);
            }
        }
    }
    let count = 1usize << n;
    let per_p = exec.map_range(count, |p| {
        let hit = (0..n)
            .filter(|i| p >> i & 1 == 1)
            .fold(0u32, |acc, i| acc | support[i]);
        let mut forced = 0u32;
        for q in 0..count as u32 {
            if hit & q == 0 {
                forced |= q;
            }
        }
        forced
    });
    // Rows in `p` must vanish on the columns forced for `p`.
    let mut forced = vec![0u32; n];
    for (p, cols) in per_p.into_iter().enumerate() {
        for (i, f) in forced.iter_mut().enumerate() {
            if p >> i & 1 == 1 {
                *f |= cols;
            }
        }
    }
    let mut out = OperatorSubspace::zero(n, n);
    for (i, f) in forced.iter().enumerate() {
        for j in 0..n {
            if f >> j & 1 == 0 {
                out.insert(&Matrix::unit(n, n, i, j));
            }
        }
    }
    Ok(out)
}

pub fn is_masa_relatively_reflexive<S: Scalar>(v: &OperatorSubspace<S>, exec: Exec) -> Result<bool> {
    Ok(masa_relative_closure(v, exec)? == *v)
}

/// `V ⊗ I_d = span{B ⊗ I_d}` inside `M_{nd}`.
pub fn tensor_identity<S: Scalar>(v: &OperatorSubspace<S>, d: usize) -> Result<OperatorSubspace<S>> {
    let n = require_square(v)?;
    let id = Matrix::<S>::identity(d);
    Ok(v.map(n * d, n * d, |b| b.kron(&id)))
}

/// Runs the sampled reflexivity test on `V ⊗ I_d`.
pub fn tensor_identity_reflexive_check<S: Scalar>(
    v: &OperatorSubspace<S>,
    d: usize,
    cfg: &SamplerConfig,
) -> Result<bool> {
    if d < 2 {
        return Err(Error::Invalid(format!("amplification degree must be at least 2, got {d}")));
    }
    is_operator_reflexive(&tensor_identity(v, d)?, cfg)
}
