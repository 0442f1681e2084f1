//! Incremental reduced row echelon form over a [`Scalar`] field.

use crate::linalg::scalar::Scalar;

/// A set of vectors of fixed length kept in reduced row echelon form.
///
/// Rows are sorted by pivot column, every pivot entry is one and every
/// other row vanishes in that column. Two echelon forms span the same space
/// iff they are equal row by row.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    len: usize,
    rows: Vec<Vec<S>>,
    pivots: Vec<usize>,
}

fn axpy<S: Scalar>(y: &mut [S], c: &S, x: &[S]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = yi.sub(&c.mul(xi));
        }
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new(len: usize) -> Self {
        Echelon {
            len,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn from_vectors<I: IntoIterator<Item = Vec<S>>>(len: usize, vectors: I) -> Self {
        let mut e = Self::new(len);
        for v in vectors {
            e.insert(v);
        }
        e
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.len
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Remainder of `v` after subtracting its projection along the pivots.
    pub fn reduce(&self, mut v: Vec<S>) -> Vec<S> {
        assert_eq!(v.len(), self.len, "vector length");
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let c = v[p].clone();
            axpy(&mut v, &c, row);
        }
        v
    }

    /// Adds `v` to the span. Returns whether the rank grew.
    pub fn insert(&mut self, v: Vec<S>) -> bool {
        if self.is_full() {
            return false;
        }
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].inv();
        for x in r.iter_mut() {
            *x = if x.is_zero() { S::zero() } else { x.mul(&inv) };
        }
        r[p] = S::one();
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            axpy(row, &c, &r);
            row[p] = S::zero();
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    pub fn contains(&self, v: &[S]) -> bool {
        self.reduce(v.to_vec()).iter().all(S::is_zero)
    }

    /// Coordinates of `v` in the stored basis, or `None` when `v` lies outside.
    pub fn coordinates(&self, v: &[S]) -> Option<Vec<S>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }

    /// Linear combination of the stored rows with the given coefficients.
    pub fn combine(&self, coeffs: &[S]) -> Vec<S> {
        let mut out = vec![S::zero(); self.len];
        for (row, c) in self.rows.iter().zip(coeffs) {
            if c.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                if !x.is_zero() {
                    *o = o.add(&c.mul(x));
                }
            }
        }
        out
    }

    /// Basis of `{x : r·x = 0 for every stored row r}`.
    pub fn nullspace(&self) -> Vec<Vec<S>> {
        let mut is_pivot = vec![false; self.len];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.len)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut x = vec![S::zero(); self.len];
                x[f] = S::one();
                for (row, &p) in self.rows.iter().zip(&self.pivots) {
                    if !row[f].is_zero() {
                        x[p] = row[f].neg();
                    }
                }
                x
            })
            .collect()
    }
}

impl<S: Scalar> PartialEq for Echelon<S> {
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len
            && self.pivots == other.pivots
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.iter().zip(b).all(|(x, y)| x.same(y)))
    }
}

/// Basis of the solution space of the homogeneous system with the given rows.
pub fn kernel<S: Scalar, I: IntoIterator<Item = Vec<S>>>(len: usize, equations: I) -> Vec<Vec<S>> {
    let mut e = Echelon::new(len);
    for row in equations {
        e.insert(row);
        if e.is_full() {
            break;
        }
    }
    e.nullspace()
}
