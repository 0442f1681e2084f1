//! Quantum relations: bimodules over the commutant of a von Neumann algebra.

use std::sync::Arc;

use serde_json::json;

use crate::algebra::VonNeumannAlgebra;
use crate::class::RelationClass;
use crate::error::{Error, Result};
use crate::finite::FiniteRelation;
use crate::io::matrix_to_json;
use crate::linalg::{GaussRat, Matrix, OperatorSubspace, Scalar};

/// A subspace `V ⊆ M_n` with `M'VM' ⊆ V` for its ambient algebra `M`.
#[derive(Clone, Debug)]
pub struct QuantumRelation<S: Scalar = GaussRat> {
    ambient: Arc<VonNeumannAlgebra<S>>,
    space: OperatorSubspace<S>,
}

impl<S: Scalar> QuantumRelation<S> {
    /// The smallest quantum relation containing `generators`: the span of
    /// `B g C` over `B, C ∈ M'`.
    pub fn generate(ambient: &Arc<VonNeumannAlgebra<S>>, generators: &[Matrix<S>]) -> Result<Self> {
        let n = ambient.n();
        let gens = OperatorSubspace::try_span_in(n, n, generators)?;
        let c = ambient.commutant();
        let space = c.multiply_spans(&gens)?.multiply_spans(c)?;
        Ok(QuantumRelation {
            ambient: Arc::clone(ambient),
            space,
        })
    }

    /// Validates the bimodule condition on a raw subspace.
    pub fn from_subspace(ambient: &Arc<VonNeumannAlgebra<S>>, space: OperatorSubspace<S>) -> Result<Self> {
        let n = ambient.n();
        if space.shape() != (n, n) {
            return Err(Error::DimensionMismatch(space.n(), n));
        }
        let vb = space.basis();
        for b in ambient.commutant().basis() {
            for v in &vb {
                for (side, p) in [("left", b.mul(v)), ("right", v.mul(&b))] {
                    if !space.contains(&p) {
                        return Err(Error::validation(
                            format!("the subspace is not closed under {side} multiplication by the commutant"),
                            json!({"commutant_element": matrix_to_json(&b), "element": matrix_to_json(v)}),
                        ));
                    }
                }
            }
        }
        Ok(QuantumRelation {
            ambient: Arc::clone(ambient),
            space,
        })
    }

    pub(crate) fn from_trusted(ambient: &Arc<VonNeumannAlgebra<S>>, space: OperatorSubspace<S>) -> Self {
        QuantumRelation {
            ambient: Arc::clone(ambient),
            space,
        }
    }

    pub fn zero(ambient: &Arc<VonNeumannAlgebra<S>>) -> Self {
        let n = ambient.n();
        Self::from_trusted(ambient, OperatorSubspace::zero(n, n))
    }

    pub fn full(ambient: &Arc<VonNeumannAlgebra<S>>) -> Self {
        let n = ambient.n();
        Self::from_trusted(ambient, OperatorSubspace::full(n, n))
    }

    /// The diagonal relation `M'`.
    pub fn diagonal(ambient: &Arc<VonNeumannAlgebra<S>>) -> Self {
        Self::from_trusted(ambient, ambient.commutant().clone())
    }

    pub fn ambient(&self) -> &Arc<VonNeumannAlgebra<S>> {
        &self.ambient
    }

    pub fn space(&self) -> &OperatorSubspace<S> {
        &self.space
    }

    pub fn n(&self) -> usize {
        self.ambient.n()
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn contains(&self, a: &Matrix<S>) -> bool {
        self.space.contains(a)
    }

    fn check_ambient(&self, other: &Self) -> Result<()> {
        if Arc::ptr_eq(&self.ambient, &other.ambient) || *self.ambient == *other.ambient {
            Ok(())
        } else {
            Err(Error::AmbientMismatch)
        }
    }

    /// `V*`.
    pub fn transpose(&self) -> Self {
        Self::from_trusted(&self.ambient, self.space.adjoint_space())
    }

    /// The span of products `VW`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::from_trusted(&self.ambient, self.space.multiply_spans(&other.space)?))
    }

    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::from_trusted(&self.ambient, self.space.intersect(&other.space)?))
    }

    pub fn join(&self, other: &Self) -> Result<Self> {
        self.check_ambient(other)?;
        Ok(Self::from_trusted(&self.ambient, self.space.sum(&other.space)?))
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.space.is_subspace_of(&other.space)
    }

    /// `V ∩ V*`, a quantum equivalence relation when `V` is a preorder.
    pub fn symmetric_part(&self) -> Self {
        let s = self
            .space
            .intersect(&self.space.adjoint_space())
            .expect("same shape");
        Self::from_trusted(&self.ambient, s)
    }

    /// `M' ⊆ V`.
    pub fn is_reflexive(&self) -> bool {
        self.ambient.commutant().is_subspace_of(&self.space)
    }

    /// `V* = V`.
    pub fn is_symmetric(&self) -> bool {
        self.space.adjoint_space() == self.space
    }

    /// `V ∩ V* ⊆ M'`.
    pub fn is_antisymmetric(&self) -> bool {
        self.symmetric_part().space.is_subspace_of(self.ambient.commutant())
    }

    /// `V² ⊆ V`.
    pub fn is_transitive(&self) -> bool {
        self.space
            .multiply_spans(&self.space)
            .expect("same shape")
            .is_subspace_of(&self.space)
    }

    pub fn classify(&self) -> RelationClass {
        RelationClass::from_flags(
            self.is_reflexive(),
            self.is_symmetric(),
            self.is_antisymmetric(),
            self.is_transitive(),
        )
    }

    fn require_masa(ambient: &VonNeumannAlgebra<S>) -> Result<()> {
        if !ambient.is_diagonal_masa() {
            return Err(Error::NotDiagonalMasa(ambient.n()));
        }
        Ok(())
    }

    /// `V_R = span{E_xy : (x, y) ∈ R}` over the diagonal masa.
    pub fn from_classical(ambient: &Arc<VonNeumannAlgebra<S>>, r: &FiniteRelation) -> Result<Self> {
        Self::require_masa(ambient)?;
        let n = ambient.n();
        if r.size() != n {
            return Err(Error::BaseMismatch(r.size(), n));
        }
        let units: Vec<_> = r.pairs().into_iter().map(|(x, y)| Matrix::unit(n, n, x, y)).collect();
        Ok(Self::from_trusted(ambient, OperatorSubspace::span_in(n, n, &units)))
    }

    /// `R_V = {(x, y) : ⟨A e_y, e_x⟩ ≠ 0 for some A ∈ V}`.
    pub fn to_classical(&self) -> Result<FiniteRelation> {
        Self::require_masa(&self.ambient)?;
        let n = self.n();
        let mut r = FiniteRelation::empty(n);
        for row in self.space.echelon().rows() {
            for (idx, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    r.insert(idx / n, idx % n);
                }
            }
        }
        Ok(r)
    }

    /// `M_d ⊗ V = span{E_ij ⊗ A}`, a relation over `I_d ⊗ M`.
    pub fn amplify(&self, d: usize) -> Self {
        let amb = Arc::new(self.ambient.amplify(d));
        self.amplify_into(&amb, d)
    }

    /// As [`QuantumRelation::amplify`] with a precomputed `I_d ⊗ M`.
    pub fn amplify_into(&self, amplified: &Arc<VonNeumannAlgebra<S>>, d: usize) -> Self {
        let nd = self.n() * d;
        assert_eq!(amplified.n(), nd, "amplified ambient size");
        let mut space = OperatorSubspace::zero(nd, nd);
        for a in self.space.basis() {
            for i in 0..d {
                for j in 0..d {
                    space.insert(&Matrix::unit(d, d, i, j).kron(&a));
                }
            }
        }
        Self::from_trusted(amplified, space)
    }

    /// Inverse of amplification: the relation cut out by the first diagonal
    /// block, `(P ⊗ I) W (P ⊗ I)` with `P = E_00`.
    pub fn compress(&self, base: &Arc<VonNeumannAlgebra<S>>) -> Result<Self> {
        let n = base.n();
        if n == 0 || !self.n().is_multiple_of(n) {
            return Err(Error::DimensionMismatch(self.n(), n));
        }
        let space = self.space.map(n, n, |w| w.block(0, 0, n, n));
        Self::from_subspace(base, space)
    }

    /// Whether `V = P V Q` for `P` the projection onto the first `h`
    /// coordinates and `Q = 1 − P`: the relation lives in the corner
    /// linking the two summands of a direct sum.
    pub fn lives_in_corner(&self, h: usize) -> bool {
        let n = self.n();
        self.space.basis().iter().all(|a| {
            (0..n).all(|i| (0..n).all(|j| a.get(i, j).is_zero() || (i < h && j >= h)))
        })
    }
}

impl<S: Scalar> PartialEq for QuantumRelation<S> {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.check_ambient(other).is_ok()
    }
}

/// Generates a relation on the pair `(M, N)` as a relation on `M ⊕ N`
/// supported in the `(H, K)` corner; generators are `dim H × dim K`.
pub fn corner_relation<S: Scalar>(
    m: &VonNeumannAlgebra<S>,
    n: &VonNeumannAlgebra<S>,
    generators: &[Matrix<S>],
) -> Result<QuantumRelation<S>> {
    let (h, k) = (m.n(), n.n());
    let sum = Arc::new(m.direct_sum(n));
    let mut embedded = Vec::with_capacity(generators.len());
    for g in generators {
        if g.shape() != (h, k) {
            return Err(Error::ShapeMismatch {
                expected: (h, k),
                found: g.shape(),
            });
        }
        let mut big = Matrix::zeros(h + k, h + k);
        big.set_block(0, h, g);
        embedded.push(big);
    }
    QuantumRelation::generate(&sum, &embedded)
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<GaussRat>;
    type A = VonNeumannAlgebra<GaussRat>;

    fn e(n: usize, i: usize, j: usize) -> M {
        M::unit(n, n, i, j)
    }

    #[test]
    fn generation_examples() {
        let masa = Arc::new(A::diagonal(2));
        let v = QuantumRelation::generate(&masa, &[e(2, 0, 1)]).unwrap();
        assert_eq!(*v.space(), OperatorSubspace::span_in(2, 2, &[e(2, 0, 1)]));
        let scalars = Arc::new(A::scalars(2));
        let v = QuantumRelation::generate(&scalars, &[e(2, 0, 1)]).unwrap();
        assert!(v.space().is_full());
        assert!(QuantumRelation::generate(&masa, &[]).unwrap().space().is_zero());
    }

    #[test]
    fn operations_examples() {
        let masa = Arc::new(A::diagonal(2));
        let v = QuantumRelation::generate(&masa, &[e(2, 0, 1)]).unwrap();
        let w = QuantumRelation::generate(&masa, &[e(2, 1, 0)]).unwrap();
        assert_eq!(QuantumRelation::diagonal(&masa).product(&v).unwrap(), v);
        assert_eq!(
            *v.product(&w).unwrap().space(),
            OperatorSubspace::span_in(2, 2, &[e(2, 0, 0)])
        );
        assert_eq!(v.transpose(), w);
    }

    #[test]
    fn classification_examples() {
        let masa = Arc::new(A::diagonal(2));
        let upper = QuantumRelation::generate(&masa, &[e(2, 0, 0), e(2, 0, 1), e(2, 1, 1)]).unwrap();
        assert!(upper.is_reflexive() && upper.is_transitive() && upper.is_antisymmetric());
        assert!(!upper.is_symmetric());
        assert_eq!(upper.classify(), RelationClass::PartialOrder);
        let full = Arc::new(A::full(2));
        let upper = QuantumRelation::from_subspace(&full, upper.space().clone()).unwrap();
        assert!(!upper.is_antisymmetric());
        assert_eq!(QuantumRelation::diagonal(&masa).classify(), RelationClass::Equivalence);
    }

    #[test]
    fn classical_bridge() {
        let masa = Arc::new(A::diagonal(2));
        let r = FiniteRelation::from_pairs(2, &[(0, 1)]).unwrap();
        let v = QuantumRelation::from_classical(&masa, &r).unwrap();
        assert_eq!(*v.space(), OperatorSubspace::span_in(2, 2, &[e(2, 0, 1)]));
        assert_eq!(v.to_classical().unwrap(), r);
        let empty = QuantumRelation::from_classical(&masa, &FiniteRelation::empty(2)).unwrap();
        assert!(empty.space().is_zero());
        let all = QuantumRelation::from_classical(&masa, &FiniteRelation::full(2)).unwrap();
        assert!(all.space().is_full());
        let full = Arc::new(A::full(2));
        assert_eq!(
            QuantumRelation::from_classical(&full, &r),
            Err(Error::NotDiagonalMasa(2))
        );
    }

    #[test]
    fn non_bimodules_are_rejected() {
        let masa = Arc::new(A::diagonal(2));
        let s = OperatorSubspace::span_in(2, 2, &[e(2, 0, 0).add(&e(2, 0, 1))]);
        let err = QuantumRelation::from_subspace(&masa, s).unwrap_err();
        assert!(err.witness().is_some());
    }

    #[test]
    fn amplify_then_compress() {
        let masa = Arc::new(A::diagonal(2));
        let v = QuantumRelation::generate(&masa, &[e(2, 0, 1)]).unwrap();
        let big = v.amplify(3);
        assert_eq!(big.dim(), 9);
        assert!(QuantumRelation::from_subspace(big.ambient(), big.space().clone()).is_ok());
        assert_eq!(big.compress(&masa).unwrap(), v);
    }

    #[test]
    fn corner_relations() {
        let v = corner_relation(&A::full(1), &A::scalars(2), &[M::from_ints(1, 2, &[1, 0])]).unwrap();
        assert_eq!(v.dim(), 2);
        assert!(v.lives_in_corner(1));
        assert!(!QuantumRelation::<GaussRat>::full(&Arc::new(A::full(3))).lives_in_corner(1));
    }
}
