//! Finite-dimensional von Neumann algebras inside `M_n`.
//!
//! In finite dimensions any unital `*`-closed subalgebra of `M_n` is a von
//! Neumann algebra, so generation is plain algebraic closure.

use serde_json::json;

use crate::error::{Error, Result};
use crate::io::matrix_to_json;
use crate::linalg::{GaussRat, Matrix, OperatorSubspace, Scalar};

/// A unital `*`-subalgebra of `M_n` together with its commutant.
///
/// The commutant is computed when the value is built, so values are
/// immutable and freely shareable.
#[derive(Clone, Debug)]
pub struct VonNeumannAlgebra<S: Scalar = GaussRat> {
    space: OperatorSubspace<S>,
    commutant: OperatorSubspace<S>,
}

fn commutant_of<S: Scalar>(space: &OperatorSubspace<S>) -> OperatorSubspace<S> {
    let constraints: Vec<_> = space.basis().into_iter().map(|a| (a.clone(), a)).collect();
    OperatorSubspace::solve_commutation(space.n(), &constraints)
}

/// Linear span of the unital `*`-algebra generated by `generators`.
pub(crate) fn star_algebra_span<S: Scalar>(n: usize, generators: &[Matrix<S>]) -> OperatorSubspace<S> {
    let mut space = OperatorSubspace::zero(n, n);
    let mut elems: Vec<Matrix<S>> = Vec::new();
    let mut queue: Vec<Matrix<S>> = Vec::new();
    let seeds = std::iter::once(Matrix::identity(n))
        .chain(generators.iter().cloned())
        .chain(generators.iter().map(Matrix::adjoint));
    for g in seeds {
        if space.insert(&g) {
            queue.push(g);
        }
    }
    // Worklist closure: every pair of inserted elements is multiplied in
    // both orders once the later of the two is processed.
    while let Some(x) = queue.pop() {
        if space.is_full() {
            break;
        }
        elems.push(x.clone());
        let snapshot = elems.len();
        for i in 0..snapshot {
            for p in [x.mul(&elems[i]), elems[i].mul(&x)] {
                if space.insert(&p) {
                    queue.push(p);
                }
            }
        }
    }
    space
}

impl<S: Scalar> VonNeumannAlgebra<S> {
    /// The smallest unital `*`-algebra containing `generators`.
    pub fn generate(n: usize, generators: &[Matrix<S>]) -> Result<Self> {
        for g in generators {
            if g.shape() != (n, n) {
                return Err(Error::ShapeMismatch {
                    expected: (n, n),
                    found: g.shape(),
                });
            }
        }
        let space = star_algebra_span(n, generators);
        let commutant = commutant_of(&space);
        Ok(VonNeumannAlgebra { space, commutant })
    }

    /// Validates a raw subspace as a unital `*`-algebra. Invalid input is
    /// rejected with a witness rather than repaired.
    pub fn from_subspace(space: OperatorSubspace<S>) -> Result<Self> {
        let (r, c) = space.shape();
        if r != c {
            return Err(Error::ShapeMismatch {
                expected: (r, r),
                found: (r, c),
            });
        }
        let n = r;
        if !space.contains(&Matrix::identity(n)) {
            return Err(Error::validation(
                "the subspace does not contain the identity",
                json!({"missing": matrix_to_json(&Matrix::<S>::identity(n))}),
            ));
        }
        let basis = space.basis();
        for a in &basis {
            if !space.contains(&a.adjoint()) {
                return Err(Error::validation(
                    "the subspace is not closed under adjoints",
                    json!({"element": matrix_to_json(a)}),
                ));
            }
        }
        for a in &basis {
            for b in &basis {
                let p = a.mul(b);
                if !space.contains(&p) {
                    return Err(Error::validation(
                        "the subspace is not closed under products",
                        json!({"left": matrix_to_json(a), "right": matrix_to_json(b)}),
                    ));
                }
            }
        }
        let commutant = commutant_of(&space);
        Ok(VonNeumannAlgebra { space, commutant })
    }

    pub fn full(n: usize) -> Self {
        VonNeumannAlgebra {
            space: OperatorSubspace::full(n, n),
            commutant: OperatorSubspace::scalars(n),
        }
    }

    pub fn scalars(n: usize) -> Self {
        VonNeumannAlgebra {
            space: OperatorSubspace::scalars(n),
            commutant: OperatorSubspace::full(n, n),
        }
    }

    /// The diagonal masa of `M_n`; it is its own commutant.
    pub fn diagonal(n: usize) -> Self {
        let units: Vec<_> = (0..n).map(|i| Matrix::unit(n, n, i, i)).collect();
        let space = OperatorSubspace::span_in(n, n, &units);
        VonNeumannAlgebra {
            commutant: space.clone(),
            space,
        }
    }

    /// `M_{n_1} ⊕ … ⊕ M_{n_k}` embedded block-diagonally.
    pub fn blocks(sizes: &[usize]) -> Self {
        let mut iter = sizes.iter().filter(|&&k| k > 0);
        let first = *iter.next().expect("at least one nonempty block");
        iter.fold(Self::full(first), |acc, &k| acc.direct_sum(&Self::full(k)))
    }

    pub fn n(&self) -> usize {
        self.space.n()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn space(&self) -> &OperatorSubspace<S> {
        &self.space
    }

    pub fn commutant(&self) -> &OperatorSubspace<S> {
        &self.commutant
    }

    pub fn contains(&self, a: &Matrix<S>) -> bool {
        self.space.contains(a)
    }

    /// The commutant as an algebra in its own right.
    pub fn commutant_algebra(&self) -> Self {
        VonNeumannAlgebra {
            space: self.commutant.clone(),
            commutant: commutant_of(&self.commutant),
        }
    }

    /// `M''`, recomputed from the cached commutant.
    pub fn double_commutant(&self) -> OperatorSubspace<S> {
        commutant_of(&self.commutant)
    }

    pub fn is_diagonal_masa(&self) -> bool {
        *self == Self::diagonal(self.n())
    }

    /// `I_d ⊗ M` inside `M_{dn}`: `d` copies of `M` down the diagonal.
    ///
    /// Its commutant is `M_d ⊗ M'`, the span of `E_ij ⊗ B`.
    pub fn amplify(&self, d: usize) -> Self {
        assert!(d >= 1, "amplification degree must be positive");
        let id = Matrix::<S>::identity(d);
        let nd = self.n() * d;
        let space = self.space.map(nd, nd, |a| id.kron(a));
        let mut commutant = OperatorSubspace::zero(nd, nd);
        for b in self.commutant.basis() {
            for i in 0..d {
                for j in 0..d {
                    commutant.insert(&Matrix::unit(d, d, i, j).kron(&b));
                }
            }
        }
        VonNeumannAlgebra { space, commutant }
    }

    /// `M ⊕ N` in `M_{m+n}`, with commutant `M' ⊕ N'`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let (m, k) = (self.n(), other.n());
        let zm = Matrix::<S>::zeros(m, m);
        let zk = Matrix::<S>::zeros(k, k);
        let embed = |a: &OperatorSubspace<S>, b: &OperatorSubspace<S>| {
            let mut out = OperatorSubspace::zero(m + k, m + k);
            for x in a.basis() {
                out.insert(&x.direct_sum(&zk));
            }
            for y in b.basis() {
                out.insert(&zm.direct_sum(&y));
            }
            out
        };
        VonNeumannAlgebra {
            space: embed(&self.space, &other.space),
            commutant: embed(&self.commutant, &other.commutant),
        }
    }
}

impl<S: Scalar> PartialEq for VonNeumannAlgebra<S> {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
    }
}
