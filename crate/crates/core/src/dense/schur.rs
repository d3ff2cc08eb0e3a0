use rug::Float;

use super::Mat;
use crate::num::{pow2, Cx, Scalar};

/// Complex Schur decomposition `A = Q T Q^H` with `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur {
    pub t: Mat<Cx>,
    pub q: Mat<Cx>,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<Cx> {
        (0..self.t.rows()).map(|i| self.t[(i, i)].clone()).collect()
    }
}

/// Householder reduction to Hessenberg form followed by single-shift QR
/// iteration with Wilkinson shifts.
pub fn schur(a: &Mat<Cx>, prec: u32) -> Schur {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = Mat::<Cx>::identity(n, prec);
    hessenberg(&mut h, &mut q, prec);

    let norm = h.frob();
    if norm.is_zero() || n <= 1 {
        return Schur { t: h, q };
    }
    let ulp = pow2(-(prec as i64) + 4, prec);
    let tiny = Float::with_val(prec, &norm * &ulp);

    let mut hi = n - 1;
    let mut iter = 0usize;
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].abs();
            let diag = Float::with_val(prec, h[(l, l)].abs() + h[(l - 1, l - 1)].abs());
            if sub <= Float::with_val(prec, &diag * &ulp) || sub <= tiny {
                h[(l, l - 1)] = Cx::zero(prec);
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n {
            // No convergence: leave the remaining block as is.
            break;
        }
        let mu = if iter.is_multiple_of(11) {
            let s = h[(hi, hi - 1)].abs();
            h[(hi, hi)].add(&Cx::from_real(Float::with_val(prec, &s * 0.75)))
        } else {
            wilkinson_shift(&h, hi, prec)
        };
        qr_step(&mut h, &mut q, l, hi, &mu, prec);
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = Cx::zero(prec);
        }
    }
    Schur { t: h, q }
}

fn hessenberg(h: &mut Mat<Cx>, q: &mut Mat<Cx>, prec: u32) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Cx> = (k + 1..n).map(|i| h[(i, k)].clone()).collect();
        let xnorm2 = super::norm2(&x, prec);
        if xnorm2.is_zero() {
            continue;
        }
        let xnorm = xnorm2.sqrt();
        let x0abs = x[0].abs();
        let phase = if x0abs.is_zero() { Cx::one(prec) } else { x[0].mul_real(&Float::with_val(prec, 1u32 / &x0abs)) };
        // v = x + phase * |x| e1, H = I - 2 v v^H / (v^H v)
        let mut v = x;
        v[0] = v[0].add(&phase.mul_real(&xnorm));
        let vnorm2 = super::norm2(&v, prec);
        if vnorm2.is_zero() {
            continue;
        }
        let beta = Float::with_val(prec, 2u32 / &vnorm2);
        // Left: rows k+1..n
        for j in 0..n {
            let mut s = Cx::zero(prec);
            for (t, vi) in v.iter().enumerate() {
                s.add_mul(&vi.conj(), &h[(k + 1 + t, j)]);
            }
            let s = s.mul_real(&beta);
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)].sub_mul(vi, &s);
            }
        }
        // Right: columns k+1..n of h and q
        for m in [&mut *h, &mut *q] {
            for i in 0..n {
                let mut s = Cx::zero(prec);
                for (t, vi) in v.iter().enumerate() {
                    s.add_mul(&m[(i, k + 1 + t)], vi);
                }
                let s = s.mul_real(&beta);
                for (t, vi) in v.iter().enumerate() {
                    m[(i, k + 1 + t)].sub_mul(&s, &vi.conj());
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Cx::zero(prec);
        }
    }
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(h: &Mat<Cx>, hi: usize, prec: u32) -> Cx {
    let a = &h[(hi - 1, hi - 1)];
    let b = &h[(hi - 1, hi)];
    let c = &h[(hi, hi - 1)];
    let d = &h[(hi, hi)];
    let half = Float::with_val(prec, 0.5);
    let m = a.add(d).mul_real(&half);
    let delta = a.sub(d).mul_real(&half);
    let disc = delta.mul(&delta).add(&b.mul(c)).sqrt();
    let l1 = m.add(&disc);
    let l2 = m.sub(&disc);
    if l1.sub(d).abs2() <= l2.sub(d).abs2() {
        l1
    } else {
        l2
    }
}

/// Rotation `[[c, s], [-conj(s), c]]` mapping `(x, y)` to `(r, 0)`.
fn givens(x: &Cx, y: &Cx, prec: u32) -> (Float, Cx) {
    let ax = x.abs();
    let n = Float::with_val(prec, x.abs2() + y.abs2()).sqrt();
    if n.is_zero() {
        return (Float::with_val(prec, 1), Cx::zero(prec));
    }
    if ax.is_zero() {
        return (Float::new(prec), Cx::one(prec));
    }
    let c = Float::with_val(prec, &ax / &n);
    let s = x.mul(&y.conj()).mul_real(&Float::with_val(prec, 1u32 / Float::with_val(prec, &ax * &n)));
    (c, s)
}

fn qr_step(h: &mut Mat<Cx>, q: &mut Mat<Cx>, l: usize, hi: usize, mu: &Cx, prec: u32) {
    let n = h.rows();
    for i in l..=hi {
        h[(i, i)] = h[(i, i)].sub(mu);
    }
    let mut rots = Vec::with_capacity(hi - l);
    for k in l..hi {
        let (c, s) = givens(&h[(k, k)], &h[(k + 1, k)], prec);
        let sc = s.conj();
        for j in k..n {
            let x = h[(k, j)].clone();
            let y = h[(k + 1, j)].clone();
            h[(k, j)] = x.mul_real(&c).add(&s.mul(&y));
            h[(k + 1, j)] = y.mul_real(&c).sub(&sc.mul(&x));
        }
        h[(k + 1, k)] = Cx::zero(prec);
        rots.push((c, s));
    }
    for (idx, (c, s)) in rots.iter().enumerate() {
        let k = l + idx;
        let sc = s.conj();
        let top = (k + 1).min(hi);
        for i in 0..=top {
            let x = h[(i, k)].clone();
            let y = h[(i, k + 1)].clone();
            h[(i, k)] = x.mul_real(c).add(&y.mul(&sc));
            h[(i, k + 1)] = y.mul_real(c).sub(&x.mul(s));
        }
        for i in 0..n {
            let x = q[(i, k)].clone();
            let y = q[(i, k + 1)].clone();
            q[(i, k)] = x.mul_real(c).add(&y.mul(&sc));
            q[(i, k + 1)] = y.mul_real(c).sub(&x.mul(s));
        }
    }
    for i in l..=hi {
        h[(i, i)] = h[(i, i)].add(mu);
    }
}

/// Unit eigenvector for the eigenvalue at diagonal position `p` of `T`,
/// mapped back through `Q`. Near-zero denominators are clamped so repeated
/// eigenvalues still give a finite vector.
pub fn eigenvector(s: &Schur, p: usize, prec: u32) -> Vec<Cx> {
    let n = s.t.rows();
    let lambda = s.t[(p, p)].clone();
    let norm = s.t.frob();
    let smin = {
        let rel = Float::with_val(prec, lambda.abs() * pow2(-(prec as i64), prec));
        let abs = Float::with_val(prec, &norm * pow2(-(prec as i64), prec));
        let floor = pow2(-(prec as i64) * 2, prec);
        rel.max(&abs).max(&floor)
    };
    let mut y = vec![Cx::zero(prec); n];
    y[p] = Cx::one(prec);
    for i in (0..p).rev() {
        let mut acc = Cx::zero(prec);
        for j in i + 1..=p {
            acc.add_mul(&s.t[(i, j)], &y[j]);
        }
        let mut den = s.t[(i, i)].sub(&lambda);
        if den.abs() < smin {
            den = Cx::from_real(smin.clone());
        }
        y[i] = acc.neg().div(&den);
    }
    let mut v = vec![Cx::zero(prec); n];
    for (i, vi) in v.iter_mut().enumerate() {
        for (j, yj) in y.iter().enumerate().take(p + 1) {
            vi.add_mul(&s.q[(i, j)], yj);
        }
    }
    let nv = super::norm2(&v, prec).sqrt();
    let inv = Float::with_val(prec, 1u32 / &nv);
    v.iter().map(|x| x.mul_real(&inv)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cmat(n: usize, v: &[f64]) -> Mat<Cx> {
        Mat::from_fn(n, n, |i, j| Cx::from_f64(v[i * n + j], 0.0, 256))
    }

    #[test]
    fn rotation_matrix_has_imaginary_spectrum() {
        let a = cmat(2, &[0.0, -1.0, 1.0, 0.0]);
        let s = schur(&a, 256);
        let mut ims: Vec<f64> = s.eigenvalues().iter().map(|z| z.im.to_f64()).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-60 && (ims[1] - 1.0).abs() < 1e-60);
    }

    #[test]
    fn schur_reconstructs_and_eigenvectors_satisfy_equation() {
        let a = cmat(4, &[4.0, 1.0, -2.0, 2.0, 1.0, 2.0, 0.0, 1.0, -2.0, 0.0, 3.0, -2.0, 2.0, 1.0, -2.0, -1.0]);
        let s = schur(&a, 256);
        let back = s.q.matmul(&s.t).matmul(&s.q.adjoint());
        for i in 0..4 {
            for j in 0..4 {
                assert!(back[(i, j)].sub(&a[(i, j)]).abs().to_f64() < 1e-60);
            }
        }
        for p in 0..4 {
            let v = eigenvector(&s, p, 256);
            let lam = &s.t[(p, p)];
            for i in 0..4 {
                let mut r = Cx::zero(256);
                for j in 0..4 {
                    r.add_mul(&a[(i, j)], &v[j]);
                }
                r = r.sub(&lam.mul(&v[i]));
                assert!(r.abs().to_f64() < 1e-55);
            }
        }
    }

    #[test]
    fn defective_zero_matrix_gives_finite_vector() {
        let a = cmat(2, &[0.0, 1.0, 0.0, 0.0]);
        let s = schur(&a, 128);
        let v = eigenvector(&s, 1, 128);
        assert!(v.iter().all(|x| x.re.is_finite() && x.im.is_finite()));
    }
}
