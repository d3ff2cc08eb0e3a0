use crate::classify::{classify, AsymptoticReport, ClassifierConfig};
use crate::dense;
use crate::error::{GnaError, Result};
use crate::linalg::{det, kernel_free_vector, norm_sq, realify_kernel_vector, GenMatrix, GenVector};
use crate::num::{cmp_float, Cx};
use crate::scalar::{GenScalar, ScalarKind};

/// `λ` is an eigenvalue of `A` exactly when `det(A − λI)` is negligible.
pub fn is_eigenvalue(a: &GenMatrix, lambda: &GenScalar, cfg: &ClassifierConfig) -> Result<(bool, AsymptoticReport)> {
    let r = classify(&det(&a.shift(lambda)?)?, cfg);
    Ok((r.classification.is_negligible(), r))
}

/// Unit eigenvector for an eigenvalue `λ`, taken from the kernel of
/// `A − λI`. With `realify` set and both `A` and `λ` real, the vector is
/// made real and renormalized.
pub fn eigenpair_from_root(
    a: &GenMatrix,
    lambda: &GenScalar,
    realify: bool,
    cfg: &ClassifierConfig,
) -> Result<GenVector> {
    let (ok, r) = is_eigenvalue(a, lambda, cfg)?;
    if !ok {
        return Err(GnaError::Precondition(format!("det(A − λI) is {}, so λ is not an eigenvalue", r.classification)));
    }
    let b = a.shift(lambda)?;
    let z = kernel_free_vector(&b, cfg)?;
    let real_case = a.kind() == ScalarKind::Real && lambda.kind() == ScalarKind::Real;
    let x = if realify && real_case && z.kind() == ScalarKind::Complex {
        let v = realify_kernel_vector(&z, &b, cfg)?;
        let inv = norm_sq(&v).sqrt()?.invert(cfg)?;
        v.scale(&inv)?
    } else {
        z
    };
    let resid = a.matvec(&x)?.sub(&x.scale(lambda)?)?.negligibility(cfg);
    if !resid.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!("Ax − λx is {}, not negligible", resid.classification)));
    }
    let dn = classify(&norm_sq(&x).sub(&GenScalar::one(x.grid()))?, cfg);
    if !dn.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!("‖x‖² − 1 is {}", dn.classification)));
    }
    Ok(x)
}

/// Per-sample eigenvalues from a Schur decomposition, each sample sorted by
/// real part then imaginary part, descending.
///
/// This is a sampling utility, not a well-defined tuple of generalized
/// numbers: for general matrices the per-sample order need not be
/// independent of the representative.
pub fn sampled_eigenvalues(a: &GenMatrix) -> Result<Vec<GenScalar>> {
    if !a.is_square() {
        return Err(GnaError::Shape(format!("eigenvalues of a {}x{} matrix", a.rows(), a.cols())));
    }
    let p = a.grid().prec();
    let per_sample: Vec<Vec<Cx>> = crate::linalg::map_cached(&a.complex_samples(), |m| {
        let mut ev = dense::schur(m, p).eigenvalues();
        ev.sort_by(|x, y| cmp_float(&y.re, &x.re).then(cmp_float(&y.im, &x.im)));
        ev
    });
    let all_real = a.kind() == ScalarKind::Real && per_sample.iter().flatten().all(|z| z.im.is_zero());
    Ok((0..a.rows())
        .map(|k| {
            if all_real {
                GenScalar::from_fn(a.grid(), |i| per_sample[i][k].re.clone())
            } else {
                GenScalar::from_fn_cx(a.grid(), |i| per_sample[i][k].clone())
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, Grid, GridKind};
    use crate::idempotent::Idempotent;

    fn grid() -> Grid {
        make_grid(GridKind::Dyadic, 4, 40).unwrap()
    }

    fn cfg() -> ClassifierConfig {
        ClassifierConfig::default()
    }

    #[test]
    fn idempotent_example_eigenvalues() {
        let g = grid();
        let c = Idempotent::even(&g).to_scalar();
        let one_c = GenScalar::one(&g).sub(&c).unwrap();
        let a = GenMatrix::diag(&g, &[one_c.clone(), c.clone()]).unwrap();
        for l in [GenScalar::zero(&g), GenScalar::one(&g), c.clone(), one_c.clone()] {
            assert!(is_eigenvalue(&a, &l, &cfg()).unwrap().0);
        }
        assert!(!is_eigenvalue(&a, &GenScalar::constant(&g, 0.5), &cfg()).unwrap().0);
        let x = eigenpair_from_root(&a, &one_c, true, &cfg()).unwrap();
        assert!(x.same_samples(&GenVector::basis(&g, 2, 0)));
    }

    #[test]
    fn non_eigenvalue_is_rejected() {
        let g = grid();
        let a = GenMatrix::identity(&g, 2);
        let r = eigenpair_from_root(&a, &GenScalar::constant(&g, 2.0), false, &cfg());
        assert!(matches!(r, Err(GnaError::Precondition(_))));
    }

    #[test]
    fn rotation_has_complex_sampled_eigenvalues() {
        let g = grid();
        let a = GenMatrix::from_f64(&g, 2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
        let ev = sampled_eigenvalues(&a).unwrap();
        let (re, im) = ev[0].to_f64_pairs()[0];
        assert!(re.abs() < 1e-30 && (im - 1.0).abs() < 1e-30);
    }
}
