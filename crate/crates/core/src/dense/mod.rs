//! Dense per-sample kernels over [`Scalar`] entries.
//!
//! These operate on one grid sample at a time; the generalized types in
//! `linalg` fan them out over the grid.

mod jacobi;
mod lu;
mod ortho;
mod schur;

pub use jacobi::hermitian_eigen;
pub use lu::{det, inverse, lu, solve, Lu};
pub use ortho::{complete_basis, orthonormalize};
pub use schur::{eigenvector, schur, Schur};

use std::ops::{Index, IndexMut};

use rug::Float;

use crate::num::Scalar;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Mat<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T> Index<(usize, usize)> for Mat<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Mat<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T> Mat<T> {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[T] {
        &self.data
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has wrong length");
        Mat { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Mat<U> {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }
}

impl<T: Scalar> Mat<T> {
    pub fn zeros(rows: usize, cols: usize, prec: u32) -> Self {
        Mat::from_fn(rows, cols, |_, _| T::zero(prec))
    }

    pub fn identity(n: usize, prec: u32) -> Self {
        Mat::from_fn(n, n, |i, j| if i == j { T::one(prec) } else { T::zero(prec) })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(rows: usize, cols: &[Vec<T>]) -> Self {
        Mat::from_fn(rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn set_col(&mut self, j: usize, v: &[T]) {
        for (i, x) in v.iter().enumerate() {
            self[(i, j)] = x.clone();
        }
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn adjoint(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn matmul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matmul shape mismatch");
        let prec = self.prec_or(o);
        let mut out = Mat::<T>::zeros(self.rows, o.cols, prec);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = &self[(i, l)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = &o[(l, j)];
                    if !b.is_zero() {
                        out[(i, j)].add_mul(a, b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Self) -> Self {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].add(&o[(i, j)]))
    }

    pub fn sub(&self, o: &Self) -> Self {
        Mat::from_fn(self.rows, self.cols, |i, j| self[(i, j)].sub(&o[(i, j)]))
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn scale_real(&self, s: &Float) -> Self {
        self.map(|x| x.mul_real(s))
    }

    /// Squared Frobenius norm.
    pub fn frob2(&self) -> Float {
        let prec = self.data.first().map_or(64, |x| x.prec());
        let mut s = Float::new(prec);
        for x in &self.data {
            s += x.abs2();
        }
        s
    }

    pub fn frob(&self) -> Float {
        self.frob2().sqrt()
    }

    fn prec_or(&self, o: &Self) -> u32 {
        self.data.first().or_else(|| o.data.first()).map_or(64, |x| x.prec())
    }
}

/// `Σ v_j · conj(w_j)`
pub fn dot<T: Scalar>(v: &[T], w: &[T], prec: u32) -> T {
    let mut s = T::zero(prec);
    for (a, b) in v.iter().zip(w) {
        s.add_mul(a, &b.conj());
    }
    s
}

pub fn norm2<T: Scalar>(v: &[T], prec: u32) -> Float {
    let mut s = Float::new(prec);
    for x in v {
        s += x.abs2();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::num::Cx;

    fn m(rows: usize, cols: usize, v: &[f64]) -> Mat<Float> {
        Mat::from_fn(rows, cols, |i, j| Float::with_val(128, v[i * cols + j]))
    }

    #[test]
    fn identity_is_neutral() {
        let a = m(2, 3, &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        let i2 = Mat::<Float>::identity(2, 128);
        assert_eq!(i2.matmul(&a), a);
        assert_eq!(a.transpose().transpose(), a);
    }

    #[test]
    fn matmul_hand_values() {
        let a = m(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let b = m(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert_eq!(a.matmul(&b), m(2, 2, &[2.0, 1.0, 4.0, 3.0]));
    }

    #[test]
    fn adjoint_conjugates() {
        let a = Mat::from_fn(1, 2, |_, j| Cx::from_f64(j as f64, 1.0, 64));
        let h = a.adjoint();
        assert_eq!(h.rows(), 2);
        assert_eq!(h[(1, 0)].im.to_f64(), -1.0);
    }
}
