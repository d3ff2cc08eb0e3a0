use rug::Float;

use super::Mat;
use crate::num::{pow2, Scalar};

const MAX_SWEEPS: usize = 80;

/// Cyclic Jacobi eigendecomposition of a Hermitian matrix.
///
/// Returns the eigenvalues in the order of the diagonal after convergence
/// and the unitary matrix whose columns are the matching eigenvectors. Only
/// the upper triangle's Hermitian part is trusted; the input is assumed
/// Hermitian.
pub fn hermitian_eigen<T: Scalar>(a: &Mat<T>, prec: u32) -> (Vec<Float>, Mat<T>) {
    let n = a.rows();
    let mut a = a.clone();
    let mut v = Mat::<T>::identity(n, prec);
    for i in 0..n {
        a[(i, i)] = T::from_real(a[(i, i)].re());
    }
    let scale = a.frob();
    if scale.is_zero() {
        return ((0..n).map(|_| Float::new(prec)).collect(), v);
    }
    let tol = Float::with_val(prec, &scale * pow2(-(prec as i64) + 8, prec));
    let tol2 = Float::with_val(prec, tol.square_ref());

    for _ in 0..MAX_SWEEPS {
        if off_diagonal2(&a, prec) <= tol2 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q, prec);
            }
        }
    }
    let values = (0..n).map(|i| a[(i, i)].re()).collect();
    (values, v)
}

fn off_diagonal2<T: Scalar>(a: &Mat<T>, prec: u32) -> Float {
    let mut s = Float::new(prec);
    for i in 0..a.rows() {
        for j in i + 1..a.cols() {
            s += a[(i, j)].abs2();
        }
    }
    s * 2u32
}

fn rotate<T: Scalar>(a: &mut Mat<T>, v: &mut Mat<T>, p: usize, q: usize, prec: u32) {
    let g = a[(p, q)].clone();
    if g.is_zero() {
        return;
    }
    let n = a.rows();
    let r = g.abs();

    // Make the (p, q) entry real positive by scaling column q by w and row q
    // by conj(w).
    let w = g.conj().mul_real(&Float::with_val(prec, 1u32 / &r));
    if T::IS_COMPLEX || w.re() < 0 {
        let wc = w.conj();
        for i in 0..n {
            a[(i, q)] = a[(i, q)].mul(&w);
            v[(i, q)] = v[(i, q)].mul(&w);
        }
        for j in 0..n {
            a[(q, j)] = a[(q, j)].mul(&wc);
        }
    }

    let app = a[(p, p)].re();
    let aqq = a[(q, q)].re();
    let theta = Float::with_val(prec, &aqq - &app) / Float::with_val(prec, &r * 2u32);
    let root = (Float::with_val(prec, theta.square_ref()) + 1u32).sqrt();
    let mut t = Float::with_val(prec, 1u32) / (Float::with_val(prec, theta.abs_ref()) + root);
    if theta.is_sign_negative() {
        t = -t;
    }
    let c = (Float::with_val(prec, t.square_ref()) + 1u32).sqrt().recip();
    let s = Float::with_val(prec, &t * &c);

    for i in 0..n {
        let aip = a[(i, p)].clone();
        let aiq = a[(i, q)].clone();
        a[(i, p)] = aip.mul_real(&c).sub(&aiq.mul_real(&s));
        a[(i, q)] = aip.mul_real(&s).add(&aiq.mul_real(&c));
        let vip = v[(i, p)].clone();
        let viq = v[(i, q)].clone();
        v[(i, p)] = vip.mul_real(&c).sub(&viq.mul_real(&s));
        v[(i, q)] = vip.mul_real(&s).add(&viq.mul_real(&c));
    }
    for j in 0..n {
        let apj = a[(p, j)].clone();
        let aqj = a[(q, j)].clone();
        a[(p, j)] = apj.mul_real(&c).sub(&aqj.mul_real(&s));
        a[(q, j)] = apj.mul_real(&s).add(&aqj.mul_real(&c));
    }
    let tr = Float::with_val(prec, &t * &r);
    a[(p, p)] = T::from_real(Float::with_val(prec, &app - &tr));
    a[(q, q)] = T::from_real(Float::with_val(prec, &aqq + &tr));
    a[(p, q)] = T::zero(prec);
    a[(q, p)] = T::zero(prec);
}
