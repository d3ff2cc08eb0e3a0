use super::Mat;
use crate::num::Scalar;

/// LU factorization with partial pivoting, `P A = L U`.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: Mat<T>,
    perm: Vec<usize>,
    odd: bool,
    singular: bool,
}

/// Factors a square matrix. An exactly zero pivot column marks the factor
/// singular; factorization still completes so the determinant is zero.
pub fn lu<T: Scalar>(a: &Mat<T>) -> Lu<T> {
    assert!(a.is_square(), "LU of a non-square matrix");
    let n = a.rows();
    let mut m = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut odd = false;
    let mut singular = false;
    for k in 0..n {
        let mut p = k;
        let mut best = m[(k, k)].abs2();
        for i in k + 1..n {
            let v = m[(i, k)].abs2();
            if v > best {
                best = v;
                p = i;
            }
        }
        if best.is_zero() {
            singular = true;
            continue;
        }
        if p != k {
            m.swap_rows(p, k);
            perm.swap(p, k);
            odd = !odd;
        }
        let pivot = m[(k, k)].clone();
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let f = m[(i, k)].div(&pivot);
            for j in k + 1..n {
                let t = m[(k, j)].clone();
                m[(i, j)].sub_mul(&f, &t);
            }
            m[(i, k)] = f;
        }
    }
    Lu { lu: m, perm, odd, singular }
}

impl<T: Scalar> Lu<T> {
    pub fn is_singular(&self) -> bool {
        self.singular
    }

    pub fn det(&self, prec: u32) -> T {
        if self.singular {
            return T::zero(prec);
        }
        let mut d = T::one(prec);
        for k in 0..self.lu.rows() {
            d = d.mul(&self.lu[(k, k)]);
        }
        if self.odd {
            d.neg()
        } else {
            d
        }
    }

    /// Solves `A X = B`; `None` when singular.
    pub fn solve(&self, b: &Mat<T>) -> Option<Mat<T>> {
        if self.singular {
            return None;
        }
        let n = self.lu.rows();
        assert_eq!(b.rows(), n, "right-hand side has wrong length");
        let mut x = Mat::from_fn(n, b.cols(), |i, j| b[(self.perm[i], j)].clone());
        for c in 0..b.cols() {
            for i in 0..n {
                for l in 0..i {
                    let t = x[(l, c)].clone();
                    x[(i, c)].sub_mul(&self.lu[(i, l)], &t);
                }
            }
            for i in (0..n).rev() {
                for l in i + 1..n {
                    let t = x[(l, c)].clone();
                    x[(i, c)].sub_mul(&self.lu[(i, l)], &t);
                }
                x[(i, c)] = x[(i, c)].div(&self.lu[(i, i)]);
            }
        }
        Some(x)
    }
}

pub fn det<T: Scalar>(a: &Mat<T>, prec: u32) -> T {
    if a.rows() == 0 {
        return T::one(prec);
    }
    lu(a).det(prec)
}

pub fn solve<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Option<Mat<T>> {
    lu(a).solve(b)
}

pub fn inverse<T: Scalar>(a: &Mat<T>, prec: u32) -> Option<Mat<T>> {
    lu(a).solve(&Mat::identity(a.rows(), prec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rug::Float;

    fn m(n: usize, v: &[f64]) -> Mat<Float> {
        Mat::from_fn(n, n, |i, j| Float::with_val(256, v[i * n + j]))
    }

    #[test]
    fn det_of_permutation_has_sign() {
        let p = m(3, &[0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        assert_eq!(det(&p, 256).to_f64(), -1.0);
    }

    #[test]
    fn det_and_inverse_of_small_matrix() {
        let a = m(3, &[2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0]);
        assert!((det(&a, 256).to_f64() - 18.0).abs() < 1e-60);
        let inv = inverse(&a, 256).unwrap();
        let id = a.matmul(&inv);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((id[(i, j)].to_f64() - want).abs() < 1e-70);
            }
        }
    }

    #[test]
    fn singular_matrix_reports_zero_det() {
        let a = m(2, &[1.0, 2.0, 2.0, 4.0]);
        let f = lu(&a);
        assert!(f.is_singular());
        assert!(f.det(256).is_zero());
        assert!(solve(&a, &Mat::identity(2, 256)).is_none());
    }
}
