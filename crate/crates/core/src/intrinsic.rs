//! The finite-dimensional intrinsic picture of quantum relations.
//!
//! `M ⊗ M^op` acts on `M_n` by `Φ_{A⊗C}(B) = ABC`. Quantum relations over
//! `M` correspond to left ideals of `M ⊗ M^op` (annihilators), and left
//! ideals to projections. Elements of `M ⊗ M^op` are stored as `m × m`
//! coefficient matrices over the canonical basis `{A_a}` of `M`:
//! `c ↦ Σ c_ab A_a ⊗ A_b`.

use std::sync::Arc;

use serde_json::json;

use crate::algebra::VonNeumannAlgebra;
use crate::error::{Error, Result};
use crate::io::matrix_to_json;
use crate::linalg::{kernel, orthogonal_projection, Echelon, GaussRat, Matrix, Mode, OperatorSubspace, Scalar};
use crate::relation::QuantumRelation;

/// Structure data for the action of `M ⊗ M^op` on `M_n`.
#[derive(Clone, Debug)]
pub struct BimoduleAction<S: Scalar = GaussRat> {
    ambient: Arc<VonNeumannAlgebra<S>>,
    basis: Vec<Matrix<S>>,
    /// `left[α][s][a] = coord_s(A_α A_a)`.
    left: Vec<Matrix<S>>,
    /// `right[β][t][b] = coord_t(A_b A_β)`.
    right: Vec<Matrix<S>>,
    /// `star[a][s] = coord_s(A_a*)`.
    star: Matrix<S>,
    unit: Vec<S>,
}

/// A left ideal of `M ⊗ M^op`, as a subspace of coefficient matrices.
#[derive(Clone, Debug)]
pub struct LeftIdeal<S: Scalar = GaussRat> {
    space: OperatorSubspace<S>,
}

impl<S: Scalar> PartialEq for LeftIdeal<S> {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
    }
}

impl<S: Scalar> LeftIdeal<S> {
    pub fn space(&self) -> &OperatorSubspace<S> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// Projections separating an operator from a quantum relation after
/// amplification by `d`.
#[derive(Clone, Debug)]
pub struct SeparationWitness<S: Scalar = GaussRat> {
    pub d: usize,
    pub p: Matrix<S>,
    pub q: Matrix<S>,
    /// The functional `B ↦ tr(BT)` that annihilates the relation but not `A`.
    pub functional: Matrix<S>,
    pub operator: Matrix<S>,
}

#[derive(Clone, Debug)]
pub enum Separation<S: Scalar = GaussRat> {
    Member,
    Witness(SeparationWitness<S>),
}

impl<S: Scalar> SeparationWitness<S> {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "d": self.d,
            "p": matrix_to_json(&self.p),
            "q": matrix_to_json(&self.q),
            "functional": matrix_to_json(&self.functional),
            "operator": matrix_to_json(&self.operator),
        })
    }
}

fn coords<S: Scalar>(space: &OperatorSubspace<S>, m: &Matrix<S>) -> Vec<S> {
    space
        .coordinates(m)
        .expect("product of algebra elements lies in the algebra")
}

impl<S: Scalar> BimoduleAction<S> {
    pub fn new(ambient: &Arc<VonNeumannAlgebra<S>>) -> Self {
        let space = ambient.space();
        let basis = space.basis();
        let m = basis.len();
        let table = |f: &dyn Fn(usize, usize) -> Matrix<S>| -> Vec<Matrix<S>> {
            (0..m)
                .map(|fixed| {
                    let cols: Vec<Vec<S>> = (0..m).map(|a| coords(space, &f(fixed, a))).collect();
                    Matrix::from_columns(&cols)
                })
                .collect()
        };
        let left = table(&|alpha, a| basis[alpha].mul(&basis[a]));
        let right = table(&|beta, b| basis[b].mul(&basis[beta]));
        let star_rows: Vec<Vec<S>> = basis.iter().map(|a| coords(space, &a.adjoint())).collect();
        let star = Matrix::from_rows(star_rows).unwrap_or_else(|_| Matrix::zeros(0, 0));
        let unit = coords(space, &Matrix::identity(ambient.n()));
        BimoduleAction {
            ambient: Arc::clone(ambient),
            basis,
            left,
            right,
            star,
            unit,
        }
    }

    pub fn ambient(&self) -> &Arc<VonNeumannAlgebra<S>> {
        &self.ambient
    }

    /// `dim M`; elements of `M ⊗ M^op` are `m × m` coefficient matrices.
    pub fn m(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Matrix<S>] {
        &self.basis
    }

    fn check(&self, x: &Matrix<S>) -> Result<()> {
        let m = self.m();
        if x.shape() != (m, m) {
            return Err(Error::ShapeMismatch {
                expected: (m, m),
                found: x.shape(),
            });
        }
        Ok(())
    }

    /// Coefficients of `A ⊗ C` for `A, C ∈ M`.
    pub fn simple_tensor(&self, a: &Matrix<S>, c: &Matrix<S>) -> Result<Matrix<S>> {
        let space = self.ambient.space();
        let (ca, cc) = match (space.coordinates(a), space.coordinates(c)) {
            (Some(x), Some(y)) => (x, y),
            _ => return Err(Error::Invalid("tensor factors must lie in the algebra".into())),
        };
        let col = Matrix::from_columns(&[ca]);
        let row = Matrix::from_columns(&[cc]).transpose();
        Ok(col.mul(&row))
    }

    /// The unit `I ⊗ I`.
    pub fn one(&self) -> Matrix<S> {
        let u = Matrix::from_columns(std::slice::from_ref(&self.unit));
        u.mul(&u.transpose())
    }

    /// `Φ_X(B) = Σ c_ab A_a B A_b`.
    pub fn apply(&self, x: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>> {
        self.check(x)?;
        let n = self.ambient.n();
        let mut out = Matrix::zeros(n, n);
        for a in 0..self.m() {
            let ab = self.basis[a].mul(b);
            for c in 0..self.m() {
                let coef = x.get(a, c);
                if !coef.is_zero() {
                    out = out.add(&ab.mul(&self.basis[c]).scale(coef));
                }
            }
        }
        Ok(out)
    }

    /// The `n² × n²` matrix of `Φ_X` on row-major vectorizations:
    /// `Σ c_ab A_a ⊗ A_bᵀ`.
    pub fn action_matrix(&self, x: &Matrix<S>) -> Result<Matrix<S>> {
        self.check(x)?;
        let n = self.ambient.n();
        let mut out = Matrix::zeros(n * n, n * n);
        for a in 0..self.m() {
            for b in 0..self.m() {
                let coef = x.get(a, b);
                if !coef.is_zero() {
                    let k = self.basis[a].kron(&self.basis[b].transpose());
                    out = out.add(&k.scale(coef));
                }
            }
        }
        Ok(out)
    }

    /// `(A_α ⊗ A_β) · X = L_α X R_βᵀ`.
    fn basis_times(&self, alpha: usize, beta: usize, x: &Matrix<S>) -> Matrix<S> {
        self.left[alpha].mul(x).mul(&self.right[beta].transpose())
    }

    /// Product in `M ⊗ M^op`: `(A ⊗ C)(A' ⊗ C') = AA' ⊗ C'C`.
    pub fn mul(&self, x: &Matrix<S>, y: &Matrix<S>) -> Result<Matrix<S>> {
        self.check(x)?;
        self.check(y)?;
        let m = self.m();
        let mut out = Matrix::zeros(m, m);
        for a in 0..m {
            for b in 0..m {
                let coef = x.get(a, b);
                if !coef.is_zero() {
                    out = out.add(&self.basis_times(a, b, y).scale(coef));
                }
            }
        }
        Ok(out)
    }

    /// `(Σ c_ab A_a ⊗ A_b)* = Σ c̄_ab A_a* ⊗ A_b*`.
    pub fn adjoint(&self, x: &Matrix<S>) -> Result<Matrix<S>> {
        self.check(x)?;
        let conj = x.map(Scalar::conj);
        Ok(self.star.transpose().mul(&conj).mul(&self.star))
    }

    pub fn is_projection(&self, x: &Matrix<S>) -> Result<bool> {
        Ok(self.adjoint(x)?.same(x) && self.mul(x, x)?.same(x))
    }

    /// `(M ⊗ M^op) · X`.
    pub fn left_ideal_generated(&self, x: &Matrix<S>) -> Result<LeftIdeal<S>> {
        self.check(x)?;
        let m = self.m();
        let mut space = OperatorSubspace::zero(m, m);
        for a in 0..m {
            for b in 0..m {
                space.insert(&self.basis_times(a, b, x));
            }
        }
        Ok(LeftIdeal { space })
    }

    /// Validates that `space` is closed under left multiplication by the
    /// generators `A_α ⊗ I` and `I ⊗ A_β` of `M ⊗ M^op`.
    pub fn ideal(&self, space: OperatorSubspace<S>) -> Result<LeftIdeal<S>> {
        let m = self.m();
        if space.shape() != (m, m) {
            return Err(Error::DimensionMismatch(space.n(), m));
        }
        for x in space.basis() {
            for alpha in 0..m {
                let lx = self.left[alpha].mul(&x);
                if !space.contains(&lx) {
                    return Err(Error::validation(
                        "the subspace is not a left ideal",
                        json!({"element": matrix_to_json(&x), "left_factor": matrix_to_json(&self.simple_tensor(&self.basis[alpha], &Matrix::identity(self.ambient.n()))?)}),
                    ));
                }
                let rx = x.mul(&self.right[alpha].transpose());
                if !space.contains(&rx) {
                    return Err(Error::validation(
                        "the subspace is not a left ideal",
                        json!({"element": matrix_to_json(&x), "left_factor": matrix_to_json(&self.simple_tensor(&Matrix::identity(self.ambient.n()), &self.basis[alpha])?)}),
                    ));
                }
            }
        }
        Ok(LeftIdeal { space })
    }

    /// `𝓘_V = {X : Φ_X(B) = 0 for all B ∈ V}`.
    pub fn ideal_of_relation(&self, v: &QuantumRelation<S>) -> Result<LeftIdeal<S>> {
        if v.n() != self.ambient.n() || *v.ambient().as_ref() != *self.ambient {
            return Err(Error::AmbientMismatch);
        }
        let m = self.m();
        let n = self.ambient.n();
        let mut equations: Vec<Vec<S>> = Vec::new();
        for b in v.space().basis() {
            let left: Vec<Matrix<S>> = self.basis.iter().map(|a| a.mul(&b)).collect();
            let images: Vec<Vec<Matrix<S>>> = left
                .iter()
                .map(|ab| self.basis.iter().map(|c| ab.mul(c)).collect())
                .collect();
            for i in 0..n {
                for j in 0..n {
                    let row: Vec<S> = (0..m * m)
                        .map(|k| images[k / m][k % m].get(i, j).clone())
                        .collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        equations.push(row);
                    }
                }
            }
        }
        let ker = kernel(m * m, equations);
        let space = OperatorSubspace::from_vectors(m, m, ker);
        self.ideal(space)
    }

    /// `V_I = {B : Φ_X(B) = 0 for all X ∈ I}`.
    pub fn relation_of_ideal(&self, ideal: &LeftIdeal<S>) -> Result<QuantumRelation<S>> {
        let n = self.ambient.n();
        let mut equations = Vec::new();
        for x in ideal.space.basis() {
            let l = self.action_matrix(&x)?;
            for r in 0..n * n {
                let row: Vec<S> = (0..n * n).map(|c| l.get(r, c).clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    equations.push(row);
                }
            }
        }
        let ker = kernel(n * n, equations);
        QuantumRelation::from_subspace(&self.ambient, OperatorSubspace::from_vectors(n, n, ker))
    }

    /// The projection `P ∈ M ⊗ M^op` with `I = (M ⊗ M^op) P`.
    ///
    /// `P = 1 − Q` where `Q` is the orthogonal projection onto the joint
    /// kernel `V_I`; `Q` lies in the image of the faithful action because
    /// that kernel is invariant under the commutant of the action.
    pub fn projection_form(&self, ideal: &LeftIdeal<S>) -> Result<Matrix<S>> {
        let n = self.ambient.n();
        let v = self.relation_of_ideal(ideal)?;
        let vecs: Vec<Vec<S>> = v.space().echelon().rows().to_vec();
        let q = orthogonal_projection(n * n, &vecs);
        let qc = self.coefficients_of_action(&q)?;
        let p = self.one().sub(&qc);
        let generated = self.left_ideal_generated(&p)?;
        if generated != *ideal || !self.is_projection(&p)? {
            return Err(Error::validation(
                "the ideal is not generated by the computed projection",
                json!({"projection": matrix_to_json(&p)}),
            ));
        }
        Ok(p)
    }

    /// Recovers coefficients from an action matrix `Σ c_ab A_a ⊗ A_bᵀ`.
    ///
    /// Realigning the Kronecker structure turns the action matrix into
    /// `Σ c_ab vec(A_a) vec(A_bᵀ)ᵀ`; reading it at the pivot positions of
    /// the canonical basis isolates each coefficient.
    pub fn coefficients_of_action(&self, l: &Matrix<S>) -> Result<Matrix<S>> {
        let n = self.ambient.n();
        let m = self.m();
        let pivots = self.ambient.space().echelon().pivots();
        let mut c = Matrix::zeros(m, m);
        for (a, &pa) in pivots.iter().enumerate() {
            let (i, j) = (pa / n, pa % n);
            for (b, &pb) in pivots.iter().enumerate() {
                // A_bᵀ has its pivot at the transposed position (l, k).
                let (k, l2) = (pb % n, pb / n);
                c.set(a, b, l.get(i * n + k, j * n + l2).clone());
            }
        }
        if !self.action_matrix(&c)?.same(l) {
            return Err(Error::Invalid(
                "the matrix is not in the image of the action".into(),
            ));
        }
        Ok(c)
    }

    /// `V_{(M⊗M^op)P}`: the relation annihilated by the ideal generated by
    /// `P`. This is order reversing in `P`.
    pub fn relation_of_projection(&self, p: &Matrix<S>) -> Result<QuantumRelation<S>> {
        if !self.is_projection(p)? {
            return Err(Error::validation(
                "not a projection in the tensor algebra",
                json!({"element": matrix_to_json(p)}),
            ));
        }
        self.relation_of_ideal(&self.left_ideal_generated(p)?)
    }

    /// The order isomorphism from quantum relations to projections:
    /// `V ↦ 1 − P` where `𝓘_V = (M ⊗ M^op) P`.
    pub fn projection_of_relation(&self, v: &QuantumRelation<S>) -> Result<Matrix<S>> {
        let p = self.projection_form(&self.ideal_of_relation(v)?)?;
        Ok(self.one().sub(&p))
    }

    /// Inverse of [`BimoduleAction::projection_of_relation`].
    pub fn relation_of_complement(&self, q: &Matrix<S>) -> Result<QuantumRelation<S>> {
        self.relation_of_projection(&self.one().sub(q))
    }
}

/// Separates `a` from the relation `v` by a pair of projections in
/// `M ⊗ M_d`, or reports that `a ∈ v`.
///
/// A functional `tr(·T)` vanishing on `v` but not on `a` is factored as
/// `T = CR` with `d = rank T`; the columns of `C` and conjugated rows of `R`
/// give vectors `w, v ∈ H ⊗ ℂ^d` with `⟨(B ⊗ I)w, v⟩ = tr(BT)`. `P`, `Q`
/// project onto the `(M' ⊗ I)`-orbits of `v` and `w`.
pub fn separate<S: Scalar>(rel: &QuantumRelation<S>, a: &Matrix<S>) -> Result<Separation<S>> {
    if S::MODE != Mode::Exact {
        return Err(Error::ExactRequired("separation decides exact nonvanishing"));
    }
    let n = rel.n();
    if a.shape() != (n, n) {
        return Err(Error::ShapeMismatch {
            expected: (n, n),
            found: a.shape(),
        });
    }
    if rel.contains(a) {
        return Ok(Separation::Member);
    }
    let ann = rel.space().annihilator();
    let pairing = |t: &Matrix<S>| a.mul(t).trace();
    let t = ann
        .basis()
        .into_iter()
        .filter(|t| !pairing(t).is_zero())
        .min_by_key(|t| rank(t))
        .expect("some annihilating functional separates a non-member");
    let ech = Echelon::from_vectors(n, (0..n).map(|i| (0..n).map(|j| t.get(i, j).clone()).collect()));
    let d = ech.rank();
    let dim = n * d;
    let mut v = vec![S::zero(); dim];
    let mut w = vec![S::zero(); dim];
    for (k, (row, &pc)) in ech.rows().iter().zip(ech.pivots()).enumerate() {
        for h in 0..n {
            w[h * d + k] = t.get(h, pc).clone();
            v[h * d + k] = row[h].conj();
        }
    }
    let id = Matrix::<S>::identity(d);
    let comm: Vec<Matrix<S>> = rel
        .ambient()
        .commutant()
        .basis()
        .iter()
        .map(|b| b.kron(&id))
        .collect();
    let orbit = |x: &[S]| -> Vec<Vec<S>> { comm.iter().map(|b| b.mul_vec(x)).collect() };
    let p = orthogonal_projection(dim, &orbit(&v));
    let q = orthogonal_projection(dim, &orbit(&w));
    let witness = SeparationWitness {
        d,
        p,
        q,
        functional: t,
        operator: a.clone(),
    };
    verify_witness(rel, &witness)?;
    Ok(Separation::Witness(witness))
}

fn rank<S: Scalar>(t: &Matrix<S>) -> usize {
    let n = t.cols();
    Echelon::from_vectors(n, (0..t.rows()).map(|i| (0..n).map(|j| t.get(i, j).clone()).collect()))
        .rank()
}

/// Checks the defining properties of a separation witness.
pub fn verify_witness<S: Scalar>(rel: &QuantumRelation<S>, w: &SeparationWitness<S>) -> Result<()> {
    let id = Matrix::<S>::identity(w.d);
    let fail = |what: &str| Err(Error::validation(what.to_string(), w.to_json()));
    if !w.p.is_projection() || !w.q.is_projection() {
        return fail("witness operators are not projections");
    }
    if w.p.mul(&w.operator.kron(&id)).mul(&w.q).is_zero() {
        return fail("witness does not detect the operator");
    }
    for b in rel.space().basis() {
        if !w.p.mul(&b.kron(&id)).mul(&w.q).is_zero() {
            return fail("witness does not annihilate the relation");
        }
    }
    for c in rel.ambient().commutant().basis() {
        let ci = c.kron(&id);
        if !w.p.commutes_with(&ci) || !w.q.commutes_with(&ci) {
            return fail("witness projections do not commute with the amplified commutant");
        }
    }
    Ok(())
}
