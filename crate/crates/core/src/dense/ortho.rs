use rug::Float;

use super::{dot, norm2};
use crate::num::{fix_phase, pow2, Scalar};

fn project_out<T: Scalar>(v: &mut [T], basis: &[Vec<T>], prec: u32) {
    for q in basis {
        let c = dot(v, q, prec);
        for (x, qi) in v.iter_mut().zip(q) {
            x.sub_mul(&c, qi);
        }
    }
}

/// Modified Gram-Schmidt with one reorthogonalization pass. Vectors that are
/// numerically dependent on their predecessors are dropped.
pub fn orthonormalize<T: Scalar>(vs: &[Vec<T>], prec: u32) -> Vec<Vec<T>> {
    let floor = pow2(-(prec as i64) + 16, prec);
    let mut out: Vec<Vec<T>> = Vec::with_capacity(vs.len());
    for v in vs {
        let before = norm2(v, prec);
        let mut w = v.clone();
        project_out(&mut w, &out, prec);
        project_out(&mut w, &out, prec);
        let after = norm2(&w, prec);
        if after.is_zero() || after <= Float::with_val(prec, &before * &floor) {
            continue;
        }
        let inv = after.sqrt().recip();
        out.push(w.iter().map(|x| x.mul_real(&inv)).collect());
    }
    out
}

/// Extends an orthonormal family to an orthonormal basis of dimension `n`.
///
/// Each new vector is the residual of the standard basis vector with the
/// largest residual (first index on ties), normalized and phase-fixed.
pub fn complete_basis<T: Scalar>(q: &[Vec<T>], n: usize, prec: u32) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = q.to_vec();
    let mut added = Vec::new();
    while basis.len() < n {
        let mut best: Option<(usize, Float)> = None;
        for j in 0..n {
            let mut r = Float::with_val(prec, 1);
            for b in &basis {
                r -= b[j].abs2();
            }
            if best.as_ref().is_none_or(|(_, m)| r > *m) {
                best = Some((j, r));
            }
        }
        let (j, _) = best.expect("dimension is positive");
        let mut w: Vec<T> = (0..n).map(|i| if i == j { T::one(prec) } else { T::zero(prec) }).collect();
        project_out(&mut w, &basis, prec);
        project_out(&mut w, &basis, prec);
        let inv = norm2(&w, prec).sqrt().recip();
        let mut w: Vec<T> = w.iter().map(|x| x.mul_real(&inv)).collect();
        fix_phase(&mut w);
        basis.push(w.clone());
        added.push(w);
    }
    added
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[f64]) -> Vec<Float> {
        x.iter().map(|&a| Float::with_val(128, a)).collect()
    }

    #[test]
    fn complement_of_coordinate_plane_is_third_axis() {
        let q = vec![v(&[1.0, 0.0, 0.0]), v(&[0.0, 1.0, 0.0])];
        let add = complete_basis(&q, 3, 128);
        assert_eq!(add, vec![v(&[0.0, 0.0, 1.0])]);
    }

    #[test]
    fn complement_is_orthonormal() {
        let q = orthonormalize(&[v(&[1.0, 2.0, 2.0, 0.0])], 128);
        let add = complete_basis(&q, 4, 128);
        let mut all = q.clone();
        all.extend(add);
        for a in 0..4 {
            for b in 0..4 {
                let d = dot(&all[a], &all[b], 128).to_f64();
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((d - want).abs() < 1e-30);
            }
        }
    }

    #[test]
    fn dependent_vectors_are_dropped() {
        assert_eq!(orthonormalize(&[v(&[1.0, 1.0]), v(&[2.0, 2.0])], 128).len(), 1);
    }
}
