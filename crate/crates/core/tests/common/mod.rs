//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use num_complex::Complex64;
use qrel::finite::{FinPseudometric, Dist, FiniteRelation};
use qrel::torus::{CoeffFn, Hbar, TorusOperator};
use qrel::{GaussRat, Matrix, OperatorSubspace, QuantumRelation, Scalar, VonNeumannAlgebra};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type M = Matrix<GaussRat>;
pub type Alg = VonNeumannAlgebra<GaussRat>;
pub type Rel = QuantumRelation<GaussRat>;
pub type Space = OperatorSubspace<GaussRat>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gauss(rng: &mut ChaCha8Rng, range: i64) -> GaussRat {
    GaussRat::from_ints(rng.gen_range(-range..=range), rng.gen_range(-range..=range))
}

/// Entries are zero with probability one half, otherwise small Gaussian
/// integers.
pub fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> M {
    let mut m = M::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(0.5) {
                m.set(i, j, gauss(rng, 2));
            }
        }
    }
    m
}

pub fn random_subspace(rng: &mut ChaCha8Rng, n: usize, gens: usize) -> Space {
    let ms: Vec<M> = (0..gens).map(|_| random_matrix(rng, n)).collect();
    Space::span_in(n, n, &ms)
}

/// A unitary with Gaussian-rational entries: the Cayley transform
/// `(I − K)(I + K)⁻¹` of a skew-Hermitian `K`.
pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> M {
    let a = random_matrix(rng, n);
    let k = a.sub(&a.adjoint());
    let id = M::identity(n);
    let inv = id.add(&k).inverse().expect("I + K is invertible for skew-Hermitian K");
    id.sub(&k).mul(&inv)
}

/// A random partition of `n` into blocks `(size, multiplicity)`.
fn random_shape(rng: &mut ChaCha8Rng, n: usize) -> Vec<(usize, usize)> {
    let mut left = n;
    let mut out = Vec::new();
    while left > 0 {
        let size = rng.gen_range(1..=left);
        let mult = rng.gen_range(1..=left / size);
        out.push((size, mult));
        left -= size * mult;
    }
    out
}

/// `⊕ (M_{k_i} ⊗ I_{m_i})` conjugated by a random rational unitary and
/// regenerated from a basis.
pub fn random_algebra(rng: &mut ChaCha8Rng, n: usize) -> Alg {
    let blocks: Vec<Alg> = random_shape(rng, n)
        .into_iter()
        .map(|(k, m)| {
            let full = Alg::full(k);
            let gens: Vec<M> = full.space().basis().iter().map(|b| b.kron(&M::identity(m))).collect();
            Alg::generate(k * m, &gens).unwrap()
        })
        .collect();
    let sum = blocks[1..].iter().fold(blocks[0].clone(), |acc, b| acc.direct_sum(b));
    let u = random_unitary(rng, n);
    let conj: Vec<M> = sum.space().basis().iter().map(|b| u.mul(b).mul(&u.adjoint())).collect();
    Alg::generate(n, &conj).unwrap()
}

/// `⊕ M_{n_i}` with every `n_i ≤ max_block` and total at most `max_n`.
pub fn random_block_algebra(rng: &mut ChaCha8Rng, max_n: usize, max_block: usize) -> Alg {
    let total = rng.gen_range(1..=max_n);
    let mut sizes = Vec::new();
    let mut left = total;
    while left > 0 {
        let k = rng.gen_range(1..=left.min(max_block));
        sizes.push(k);
        left -= k;
    }
    Alg::blocks(&sizes)
}

pub fn random_relation_over(rng: &mut ChaCha8Rng, amb: &Arc<Alg>, gens: usize) -> Rel {
    let n = amb.n();
    let ms: Vec<M> = (0..gens).map(|_| random_matrix(rng, n)).collect();
    Rel::generate(amb, &ms).unwrap()
}

pub fn random_finite_relation(rng: &mut ChaCha8Rng, n: usize) -> FiniteRelation {
    let mut r = FiniteRelation::empty(n);
    for x in 0..n {
        for y in 0..n {
            if rng.gen_bool(0.4) {
                r.insert(x, y);
            }
        }
    }
    r
}

/// Shortest-path closure of random integer edge weights, with some pairs
/// at infinite distance and some at distance zero.
pub fn random_pseudometric(rng: &mut ChaCha8Rng, n: usize) -> FinPseudometric {
    let mut d = vec![vec![Dist::Infinite; n]; n];
    for (x, row) in d.iter_mut().enumerate() {
        row[x] = Dist::zero();
    }
    for x in 0..n {
        for y in x + 1..n {
            let w = match rng.gen_range(0..6) {
                0 => Dist::Infinite,
                1 => Dist::zero(),
                k => Dist::from_int(k),
            };
            d[x][y] = w.clone();
            d[y][x] = w;
        }
    }
    for k in 0..n {
        for x in 0..n {
            for y in 0..n {
                let via = d[x][k].add(&d[k][y]);
                if via < d[x][y] {
                    d[x][y] = via;
                }
            }
        }
    }
    FinPseudometric::new(d).unwrap()
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// A constant-free banded operator: diagonals with `|k|, |l| ≤ 2` and
/// tables supported in `[-2, 2]²`.
pub fn random_finite_torus(rng: &mut ChaCha8Rng, hbar: Hbar) -> TorusOperator {
    random_torus(rng, hbar, false)
}

pub fn random_torus(rng: &mut ChaCha8Rng, hbar: Hbar, constants: bool) -> TorusOperator {
    let mut offsets: Vec<(i64, i64)> = (-2..=2).flat_map(|k| (-2..=2).map(move |l| (k, l))).collect();
    offsets.shuffle(rng);
    let count = rng.gen_range(1..=4);
    let diagonals: Vec<_> = offsets[..count]
        .iter()
        .map(|&d| {
            let c = if constants && rng.gen_bool(0.5) {
                random_complex(rng)
            } else {
                Complex64::new(0.0, 0.0)
            };
            let entries: Vec<_> = (0..rng.gen_range(1..=4))
                .map(|_| ((rng.gen_range(-2..=2), rng.gen_range(-2..=2)), random_complex(rng)))
                .collect();
            (d, CoeffFn::from_parts(c, entries))
        })
        .collect();
    TorusOperator::from_diagonals(hbar, diagonals)
}
