use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::scalar::Scalar;

/// Dense row-major matrix over a [`Scalar`] field.
#[derive(Clone)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    /// The matrix unit `E_ij` of the given shape.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zeros(rows, cols);
        m.data[i * cols + j] = S::one();
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<S>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Invalid(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged rows".into()));
        }
        Self::from_vec(r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from real integer entries given row by row.
    pub fn from_ints(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count");
        Matrix {
            rows,
            cols,
            data: entries.iter().map(|&x| S::from_ints(x, 0)).collect(),
        }
    }

    pub fn diagonal(entries: &[S]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, x) in entries.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: S) {
        self.data[i * self.cols + j] = value;
    }

    /// Row-major vectorization.
    pub fn as_slice(&self) -> &[S] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<S> {
        self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(S::is_zero)
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|x| x.mul(c))
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.shape() != other.shape() {
            return Err(Error::ShapeMismatch {
                expected: self.shape(),
                found: other.shape(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, S::add))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        Ok(self.zip(other, S::sub))
    }

    /// Panicking sum; use [`Matrix::try_add`] for untrusted shapes.
    pub fn add(&self, other: &Self) -> Self {
        self.try_add(other).expect("matrix shapes")
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.try_sub(other).expect("matrix shapes")
    }

    fn zip(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch {
                expected: (self.cols, other.cols),
                found: other.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        // Skipping zero entries keeps products of matrix units cheap.
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self.data[i * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let brow = &other.data[k * other.cols..(k + 1) * other.cols];
                let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (o, b) in orow.iter_mut().zip(brow) {
                    if !b.is_zero() {
                        *o = o.add(&a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.try_mul(other).expect("matrix shapes")
    }

    pub fn mul_vec(&self, v: &[S]) -> Vec<S> {
        assert_eq!(v.len(), self.cols, "vector length");
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(S::zero(), |acc, (a, b)| acc.add(&a.mul(b)))
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].clone();
            }
        }
        out
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc.add(self.get(i, i)))
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Self {
        let (r, c) = (self.rows * other.rows, self.cols * other.cols);
        let mut out = Self::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self.data[i * self.cols + j];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        let b = &other.data[k * other.cols + l];
                        if !b.is_zero() {
                            out.data[(i * other.rows + k) * c + j * other.cols + l] = a.mul(b);
                        }
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal matrix `self ⊕ other`.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.rows + other.rows, self.cols + other.cols);
        out.set_block(0, 0, self);
        out.set_block(self.rows, self.cols, other);
        out
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(row + i, col + j, block.get(i, j).clone());
            }
        }
    }

    pub fn block(&self, row: usize, col: usize, rows: usize, cols: usize) -> Self {
        let mut out = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(row + i, col + j).clone();
            }
        }
        out
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<S>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        let mut out = Self::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for (i, x) in c.iter().enumerate() {
                out.set(i, j, x.clone());
            }
        }
        out
    }

    /// Entrywise equality under the scalar zero test.
    pub fn same(&self, other: &Self) -> bool {
        self.shape() == other.shape() && self.data.iter().zip(&other.data).all(|(a, b)| a.same(b))
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        self.mul(other).same(&other.mul(self))
    }

    pub fn is_hermitian(&self) -> bool {
        self.same(&self.adjoint())
    }

    pub fn is_projection(&self) -> bool {
        self.is_hermitian() && self.mul(self).same(self)
    }

    /// Gauss–Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot = (col..n)
                .filter(|&r| !a.get(r, col).is_zero())
                .max_by(|&x, &y| {
                    a.get(x, col)
                        .magnitude()
                        .partial_cmp(&a.get(y, col).magnitude())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })?;
            a.swap_rows(pivot, col);
            inv.swap_rows(pivot, col);
            let p = a.get(col, col).inv();
            for j in 0..n {
                a.data[col * n + j] = a.data[col * n + j].mul(&p);
                inv.data[col * n + j] = inv.data[col * n + j].mul(&p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    let t = a.data[col * n + j].mul(&f);
                    a.data[r * n + j] = a.data[r * n + j].sub(&t);
                    let t = inv.data[col * n + j].mul(&f);
                    inv.data[r * n + j] = inv.data[r * n + j].sub(&t);
                }
            }
        }
        Some(inv)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Number of nonzero entries.
    pub fn support_size(&self) -> usize {
        self.data.iter().filter(|x| !x.is_zero()).count()
    }
}

impl<S: Scalar> PartialEq for Matrix<S> {
    fn eq(&self, other: &Self) -> bool {
        self.same(other)
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        write!(f, "]")
    }
}

/// Hermitian inner product `⟨x, y⟩ = Σ x_i ȳ_i` (linear in the first slot).
pub fn inner<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter()
        .zip(y)
        .fold(S::zero(), |acc, (a, b)| acc.add(&a.mul(&b.conj())))
}

/// Orthogonal projection onto the span of `vectors`, computed with
/// unnormalized Gram–Schmidt so that no square roots appear.
pub fn orthogonal_projection<S: Scalar>(dim: usize, vectors: &[Vec<S>]) -> Matrix<S> {
    let mut ortho: Vec<(Vec<S>, S)> = Vec::new();
    for v in vectors {
        let mut u = v.clone();
        for (w, wn) in &ortho {
            let c = inner(&u, w).div(wn);
            for (ui, wi) in u.iter_mut().zip(w) {
                *ui = ui.sub(&c.mul(wi));
            }
        }
        if u.iter().all(S::is_zero) {
            continue;
        }
        let n = inner(&u, &u);
        if n.is_zero() {
            continue;
        }
        ortho.push((u, n));
    }
    let mut p = Matrix::<S>::zeros(dim, dim);
    for (u, n) in &ortho {
        let ninv = n.inv();
        for i in 0..dim {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..dim {
                let t = u[i].mul(&u[j].conj()).mul(&ninv);
                p.data[i * dim + j] = p.data[i * dim + j].add(&t);
            }
        }
    }
    p
}
