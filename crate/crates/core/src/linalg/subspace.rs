//! Linear subspaces of a matrix space, stored in canonical echelon form.
//!
//! In finite dimensions every linear subspace of `M_n` is weak* closed, so
//! plain subspaces stand in for the weak* closed ones throughout the crate.

use crate::error::{Error, Result};
use crate::linalg::echelon::{kernel, Echelon};
use crate::linalg::matrix::Matrix;
use crate::linalg::scalar::Scalar;

/// A subspace of `rows × cols` matrices, canonical under row-major
/// vectorization: equal subspaces have identical stored bases.
#[derive(Clone, Debug)]
pub struct OperatorSubspace<S> {
    rows: usize,
    cols: usize,
    ech: Echelon<S>,
}

impl<S: Scalar> OperatorSubspace<S> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        OperatorSubspace {
            rows,
            cols,
            ech: Echelon::new(rows * cols),
        }
    }

    /// All of `M_{rows×cols}`.
    pub fn full(rows: usize, cols: usize) -> Self {
        let mut s = Self::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                s.insert(&Matrix::unit(rows, cols, i, j));
            }
        }
        s
    }

    pub fn scalars(n: usize) -> Self {
        Self::span_in(n, n, &[Matrix::identity(n)])
    }

    /// Canonical span of `vectors`; the shape is taken from the first one.
    pub fn span(vectors: &[Matrix<S>]) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::Invalid(
                "cannot infer the shape of an empty span".into(),
            ));
        };
        Self::try_span_in(first.rows(), first.cols(), vectors)
    }

    pub fn try_span_in(rows: usize, cols: usize, vectors: &[Matrix<S>]) -> Result<Self> {
        let mut s = Self::zero(rows, cols);
        for m in vectors {
            if m.shape() != (rows, cols) {
                return Err(Error::ShapeMismatch {
                    expected: (rows, cols),
                    found: m.shape(),
                });
            }
            s.insert(m);
        }
        Ok(s)
    }

    /// Panicking variant of [`OperatorSubspace::try_span_in`].
    pub fn span_in(rows: usize, cols: usize, vectors: &[Matrix<S>]) -> Self {
        Self::try_span_in(rows, cols, vectors).expect("matrix shapes")
    }

    pub(crate) fn from_vectors(rows: usize, cols: usize, vectors: Vec<Vec<S>>) -> Self {
        OperatorSubspace {
            rows,
            cols,
            ech: Echelon::from_vectors(rows * cols, vectors),
        }
    }

    /// Adds a matrix to the span; returns whether the dimension grew.
    pub fn insert(&mut self, m: &Matrix<S>) -> bool {
        assert_eq!(m.shape(), self.shape(), "matrix shape");
        self.ech.insert(m.as_slice().to_vec())
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Side length of the ambient square matrices.
    pub fn n(&self) -> usize {
        self.rows
    }

    pub fn dim(&self) -> usize {
        self.ech.rank()
    }

    pub fn is_zero(&self) -> bool {
        self.ech.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.ech.is_full()
    }

    pub fn basis(&self) -> Vec<Matrix<S>> {
        self.ech
            .rows()
            .iter()
            .map(|r| Matrix::from_vec(self.rows, self.cols, r.clone()).expect("row length"))
            .collect()
    }

    pub fn echelon(&self) -> &Echelon<S> {
        &self.ech
    }

    pub fn contains(&self, m: &Matrix<S>) -> bool {
        m.shape() == self.shape() && self.ech.contains(m.as_slice())
    }

    /// Coordinates of `m` in the canonical basis.
    pub fn coordinates(&self, m: &Matrix<S>) -> Option<Vec<S>> {
        if m.shape() != self.shape() {
            return None;
        }
        self.ech.coordinates(m.as_slice())
    }

    /// The element with the given coordinates in the canonical basis.
    pub fn element(&self, coeffs: &[S]) -> Matrix<S> {
        Matrix::from_vec(self.rows, self.cols, self.ech.combine(coeffs)).expect("row length")
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::DimensionMismatch(self.rows, other.rows));
        }
        Ok(())
    }

    pub fn sum(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        let (big, small) = if self.dim() >= other.dim() {
            (self, other)
        } else {
            (other, self)
        };
        let mut out = big.clone();
        for r in small.ech.rows() {
            out.ech.insert(r.clone());
        }
        Ok(out)
    }

    /// Intersection via the kernel of `[v_1 … v_a | −w_1 … −w_b]`.
    pub fn intersect(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero(self.rows, self.cols));
        }
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let a = self.dim();
        let len = a + other.dim();
        let (vs, ws) = (self.ech.rows(), other.ech.rows());
        let equations = (0..self.rows * self.cols).filter_map(|e| {
            let row: Vec<S> = vs
                .iter()
                .map(|v| v[e].clone())
                .chain(ws.iter().map(|w| w[e].neg()))
                .collect();
            (!row.iter().all(S::is_zero)).then_some(row)
        });
        let ker = kernel(len, equations);
        let vectors = ker.into_iter().map(|x| self.ech.combine(&x[..a])).collect();
        Ok(Self::from_vectors(self.rows, self.cols, vectors))
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.shape() == other.shape()
            && self.dim() <= other.dim()
            && self.ech.rows().iter().all(|r| other.ech.contains(r))
    }

    /// Canonical span of all products `AB`, `A ∈ self`, `B ∈ other`.
    pub fn multiply_spans(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(self.cols, other.rows));
        }
        let mut out = Self::zero(self.rows, other.cols);
        let rb = other.basis();
        'outer: for a in self.basis() {
            for b in &rb {
                out.insert(&a.mul(b));
                if out.is_full() {
                    break 'outer;
                }
            }
        }
        Ok(out)
    }

    /// Span of the conjugate transposes.
    pub fn adjoint_space(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for b in self.basis() {
            out.insert(&b.adjoint());
        }
        out
    }

    /// Image under a linear map given on matrices.
    pub fn map(&self, rows: usize, cols: usize, f: impl Fn(&Matrix<S>) -> Matrix<S>) -> Self {
        let mut out = Self::zero(rows, cols);
        for b in self.basis() {
            out.insert(&f(&b));
        }
        out
    }

    /// All `X` with `L X = X R` for every constraint pair.
    pub fn solve_commutation(n: usize, constraints: &[(Matrix<S>, Matrix<S>)]) -> Self {
        let len = n * n;
        let mut ech = Echelon::new(len);
        'outer: for (l, r) in constraints {
            assert_eq!(l.shape(), (n, n), "constraint shape");
            assert_eq!(r.shape(), (n, n), "constraint shape");
            for i in 0..n {
                for j in 0..n {
                    // (LX − XR)_{ij} = Σ_k L_ik X_kj − Σ_k X_ik R_kj
                    let mut row = vec![S::zero(); len];
                    for k in 0..n {
                        let lik = l.get(i, k);
                        if !lik.is_zero() {
                            row[k * n + j] = row[k * n + j].add(lik);
                        }
                        let rkj = r.get(k, j);
                        if !rkj.is_zero() {
                            row[i * n + k] = row[i * n + k].sub(rkj);
                        }
                    }
                    ech.insert(row);
                    if ech.is_full() {
                        break 'outer;
                    }
                }
            }
        }
        Self::from_vectors(n, n, ech.nullspace())
    }

    /// `{T : tr(BT) = 0 for all B ∈ self}` under the trace pairing.
    pub fn annihilator(&self) -> Self {
        let (r, c) = self.shape();
        // tr(BT) = Σ_ij B_ij T_ji with T of shape c × r.
        let equations = self.ech.rows().iter().map(|b| {
            let mut row = vec![S::zero(); r * c];
            for i in 0..r {
                for j in 0..c {
                    row[j * r + i] = b[i * c + j].clone();
                }
            }
            row
        });
        let ker = kernel(r * c, equations.collect::<Vec<_>>());
        Self::from_vectors(c, r, ker)
    }
}

impl<S: Scalar> PartialEq for OperatorSubspace<S> {
    fn eq(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.ech == other.ech
    }
}
