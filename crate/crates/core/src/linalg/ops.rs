use rug::Float;

use super::matrix::{map_cached, GenMatrix, GenVector, MatSamples};
use crate::classify::{classify, AsymptoticReport, ClassifierConfig};
use crate::dense::{self, complete_basis, orthonormalize, Mat};
use crate::error::{GnaError, Result};
use crate::grid::same_grid;
use crate::num::{fix_phase, Cx, Scalar};
use crate::scalar::{GenScalar, Samples};

fn require_square(a: &GenMatrix, what: &str) -> Result<()> {
    if !a.is_square() {
        return Err(GnaError::Shape(format!("{what} of a {}x{} matrix", a.rows(), a.cols())));
    }
    Ok(())
}

fn det_samples(a: &GenMatrix) -> Samples {
    let p = a.grid().prec();
    match a.samples() {
        MatSamples::Real(v) => Samples::Real(map_cached(v, |m| dense::det(m, p))),
        MatSamples::Complex(v) => Samples::Complex(map_cached(v, |m| dense::det(m, p))),
    }
}

/// Samplewise determinant.
pub fn det(a: &GenMatrix) -> Result<GenScalar> {
    require_square(a, "determinant")?;
    Ok(GenScalar::from_samples(a.grid(), det_samples(a)))
}

/// Invertible exactly when the determinant is strictly nonzero.
pub fn is_invertible(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<(bool, AsymptoticReport)> {
    let r = classify(&det(a)?, cfg);
    Ok((r.classification.is_strictly_nonzero(), r))
}

fn require_invertible(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<()> {
    let (ok, report) = is_invertible(a, cfg)?;
    if !ok {
        return Err(GnaError::SingularMatrix { report: Box::new(report) });
    }
    Ok(())
}

fn solve_generic<T: Scalar + PartialEq>(a: &[Mat<T>], b: &[Mat<T>], prec: u32) -> Vec<Mat<T>> {
    let mut out: Vec<Mat<T>> = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        if i > 0 && a[i] == a[i - 1] && b[i] == b[i - 1] {
            let prev = out[i - 1].clone();
            out.push(prev);
            continue;
        }
        let x = dense::solve(&a[i], &b[i]).unwrap_or_else(|| Mat::zeros(b[i].rows(), b[i].cols(), prec));
        out.push(x);
    }
    out
}

/// Samplewise `A X = B` without any classification. Samples where `A_ε`
/// is exactly singular give zero.
pub(crate) fn solve_unchecked(a: &GenMatrix, b: &GenMatrix) -> Result<GenMatrix> {
    if !same_grid(a.grid(), b.grid()) {
        return Err(GnaError::GridMismatch);
    }
    require_square(a, "solve")?;
    if a.rows() != b.rows() {
        return Err(GnaError::Shape(format!(
            "right-hand side has {} rows for a {}x{} system",
            b.rows(),
            a.rows(),
            a.cols()
        )));
    }
    let p = a.grid().prec();
    let samples = match (a.samples(), b.samples()) {
        (MatSamples::Real(x), MatSamples::Real(y)) => MatSamples::Real(solve_generic(x, y, p)),
        _ => MatSamples::Complex(solve_generic(&a.complex_samples(), &b.complex_samples(), p)),
    };
    Ok(GenMatrix::from_samples(a.grid(), a.rows(), b.cols(), samples))
}

/// Solves `A X = B` for an invertible `A`; the residual is checked.
pub fn solve_matrix(a: &GenMatrix, b: &GenMatrix, cfg: &ClassifierConfig) -> Result<GenMatrix> {
    require_square(a, "solve")?;
    require_invertible(a, cfg)?;
    let x = solve_unchecked(a, b)?;
    let resid = a.matmul(&x)?.sub(b)?;
    let r = resid.negligibility(cfg);
    if !r.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!("solve residual is {}, not negligible", r.classification)));
    }
    Ok(x)
}

pub fn solve(a: &GenMatrix, b: &GenVector, cfg: &ClassifierConfig) -> Result<GenVector> {
    GenVector::from_matrix(solve_matrix(a, b.as_matrix(), cfg)?)
}

pub fn inverse(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<GenMatrix> {
    require_square(a, "inverse")?;
    solve_matrix(a, &GenMatrix::identity(a.grid(), a.rows()), cfg)
}

fn require_same_len(v: &GenVector, w: &GenVector) -> Result<()> {
    if !same_grid(v.grid(), w.grid()) {
        return Err(GnaError::GridMismatch);
    }
    if v.len() != w.len() {
        return Err(GnaError::Shape(format!("vectors of length {} and {}", v.len(), w.len())));
    }
    Ok(())
}

/// `Σ v_j conj(w_j)`.
pub fn inner(v: &GenVector, w: &GenVector) -> Result<GenScalar> {
    require_same_len(v, w)?;
    let m = w.as_matrix().conj_transpose().matmul(v.as_matrix())?;
    Ok(m.entry(0, 0))
}

/// `Σ |v_j|²`, always real.
pub fn norm_sq(v: &GenVector) -> GenScalar {
    let p = v.grid().prec();
    let samples = match v.as_matrix().samples() {
        MatSamples::Real(s) => s.iter().map(|m| dense::norm2(m.data(), p)).collect(),
        MatSamples::Complex(s) => s.iter().map(|m| dense::norm2(m.data(), p)).collect(),
    };
    GenScalar::from_samples(v.grid(), Samples::Real(samples))
}

/// A vector is free exactly when its squared norm is strictly positive.
pub fn is_free(v: &GenVector, cfg: &ClassifierConfig) -> bool {
    free_report(v, cfg).classification.is_strictly_positive()
}

pub fn free_report(v: &GenVector, cfg: &ClassifierConfig) -> AsymptoticReport {
    classify(&norm_sq(v), cfg)
}

/// `G_ij = ⟨v_j, v_i⟩`, i.e. `MᴴM` for `M = [v_1 … v_k]`.
pub fn gram(vs: &[GenVector]) -> Result<GenMatrix> {
    let first = vs.first().ok_or_else(|| GnaError::Shape("empty vector list".into()))?;
    let m = GenMatrix::from_columns(first.grid(), first.len(), vs)?;
    m.conj_transpose().matmul(&m)
}

/// Classification of the Gram determinant of `vs`. The empty set is free.
pub fn free_set_report(vs: &[GenVector], cfg: &ClassifierConfig) -> Result<Option<AsymptoticReport>> {
    if vs.is_empty() {
        return Ok(None);
    }
    Ok(Some(classify(&det(&gram(vs)?)?, cfg)))
}

pub fn is_free_set(vs: &[GenVector], cfg: &ClassifierConfig) -> Result<bool> {
    Ok(free_set_report(vs, cfg)?.is_none_or(|r| r.classification.is_strictly_nonzero()))
}

fn require_free_set(vs: &[GenVector], cfg: &ClassifierConfig) -> Result<()> {
    if let Some(r) = free_set_report(vs, cfg)? {
        if !r.classification.is_strictly_nonzero() {
            return Err(GnaError::NotFree { report: Box::new(r) });
        }
    }
    Ok(())
}

fn complement_generic<T: Scalar + PartialEq>(
    cols: &[Vec<Vec<T>>],
    n: usize,
    extra: usize,
    prec: u32,
) -> Vec<Vec<Vec<T>>> {
    // cols[i] holds the input vectors at sample i.
    map_cached(cols, |vs| {
        let q = orthonormalize(vs, prec);
        let mut add = complete_basis(&q, n, prec);
        add.truncate(extra);
        add
    })
}

fn sample_columns<T: Scalar>(samples: &[Mat<T>]) -> Vec<Vec<Vec<T>>> {
    samples.iter().map(|m| (0..m.cols()).map(|j| m.col(j)).collect()).collect()
}

/// Extends a free set of vectors in `K̃^n` to a basis.
///
/// At each sample the inputs are orthonormalized and the complement is
/// filled with unit vectors; see [`complete_basis`] for the choice.
pub fn extend_to_basis(vs: &[GenVector], n: usize, cfg: &ClassifierConfig) -> Result<Vec<GenVector>> {
    if let Some(v) = vs.iter().find(|v| v.len() != n) {
        return Err(GnaError::Shape(format!("vector of length {} in rank {n}", v.len())));
    }
    if vs.len() > n {
        return Err(GnaError::Shape(format!("{} vectors in rank {n}", vs.len())));
    }
    if vs.len() == n {
        require_free_set(vs, cfg)?;
        return Ok(Vec::new());
    }
    let grid = match vs.first() {
        Some(v) => v.grid().clone(),
        None => return Err(GnaError::Shape("extending the empty set needs a grid; use GenMatrix::identity".into())),
    };
    require_free_set(vs, cfg)?;
    let extra = n - vs.len();
    let p = grid.prec();
    let m = GenMatrix::from_columns(&grid, n, vs)?;
    let per_sample: Vec<GenVector> = match m.samples() {
        MatSamples::Real(s) => {
            let add = complement_generic(&sample_columns(s), n, extra, p);
            (0..extra)
                .map(|j| GenVector::from_real_columns(&grid, add.iter().map(|a| a[j].clone()).collect()))
                .collect()
        }
        MatSamples::Complex(s) => {
            let add = complement_generic(&sample_columns(s), n, extra, p);
            (0..extra)
                .map(|j| GenVector::from_complex_columns(&grid, add.iter().map(|a| a[j].clone()).collect()))
                .collect()
        }
    };
    let mut all: Vec<GenVector> = vs.to_vec();
    all.extend(per_sample.iter().cloned());
    let full = GenMatrix::from_columns(&grid, n, &all)?;
    let (ok, r) = is_invertible(&full, cfg)?;
    if !ok {
        return Err(GnaError::PostconditionFailed(format!("extended basis has determinant {}", r.classification)));
    }
    Ok(per_sample)
}

/// Unit vector `v` with `B v` negligible, for `B` with negligible
/// determinant. Each sample takes an eigenvector of the eigenvalue of least
/// modulus (first in Schur order on ties), phase-fixed. Real when `B` is
/// real and every sample happens to come out real.
pub fn kernel_free_vector(b: &GenMatrix, cfg: &ClassifierConfig) -> Result<GenVector> {
    require_square(b, "kernel vector")?;
    let d = classify(&det(b)?, cfg);
    if !d.classification.is_negligible() {
        return Err(GnaError::Precondition(format!("determinant is {}, not negligible", d.classification)));
    }
    let p = b.grid().prec();
    let cols: Vec<Vec<Cx>> = map_cached(&b.complex_samples(), |m| {
        let s = dense::schur(m, p);
        let ev = s.eigenvalues();
        let mut best = 0;
        for (i, z) in ev.iter().enumerate() {
            if z.abs2() < ev[best].abs2() {
                best = i;
            }
        }
        let mut v = dense::eigenvector(&s, best, p);
        fix_phase(&mut v);
        v
    });
    let all_real = cols.iter().all(|c| c.iter().all(|z| z.im.is_zero()));
    let v = if b.real_samples().is_some() && all_real {
        GenVector::from_real_columns(b.grid(), cols.iter().map(|c| c.iter().map(|z| z.re.clone()).collect()).collect())
    } else {
        GenVector::from_complex_columns(b.grid(), cols)
    };
    check_kernel_vector(b, &v, cfg, true)?;
    Ok(v)
}

fn check_kernel_vector(b: &GenMatrix, v: &GenVector, cfg: &ClassifierConfig, unit: bool) -> Result<()> {
    let bv = b.matvec(v)?.negligibility(cfg);
    if !bv.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!("B·v is {}, not negligible", bv.classification)));
    }
    if unit {
        let dn = classify(&norm_sq(v).sub(&GenScalar::one(v.grid()))?, cfg);
        if !dn.classification.is_negligible() {
            return Err(GnaError::PostconditionFailed(format!("‖v‖² − 1 is {}", dn.classification)));
        }
    }
    Ok(())
}

/// Real kernel vector of a real matrix from a complex unit kernel vector
/// `z = x + iy`: per sample `x` if `‖x‖² > 1/4`, else `y`.
pub fn realify_kernel_vector(z: &GenVector, a: &GenMatrix, cfg: &ClassifierConfig) -> Result<GenVector> {
    let Some(a_samples) = a.real_samples() else {
        return Err(GnaError::Precondition("matrix is not real".into()));
    };
    let _ = a_samples;
    if !same_grid(z.grid(), a.grid()) {
        return Err(GnaError::GridMismatch);
    }
    let az = a.matvec(z)?.negligibility(cfg);
    if !az.classification.is_negligible() {
        return Err(GnaError::Precondition(format!("A·z is {}, not negligible", az.classification)));
    }
    let dn = classify(&norm_sq(z).sub(&GenScalar::one(z.grid()))?, cfg);
    if !dn.classification.is_negligible() {
        return Err(GnaError::Precondition(format!("‖z‖² − 1 is {}, not negligible", dn.classification)));
    }
    let p = z.grid().prec();
    let quarter = Float::with_val(p, 0.25);
    let cols: Vec<Vec<Float>> = z
        .complex_samples()
        .iter()
        .map(|c| {
            let x: Vec<Float> = c.iter().map(|w| w.re.clone()).collect();
            if dense::norm2(&x, p) > quarter {
                x
            } else {
                c.iter().map(|w| w.im.clone()).collect()
            }
        })
        .collect();
    let v = GenVector::from_real_columns(z.grid(), cols);
    check_kernel_vector(a, &v, cfg, false)?;
    let r = free_report(&v, cfg);
    if !r.classification.is_strictly_positive() {
        return Err(GnaError::PostconditionFailed(format!("realified vector has norm² {}", r.classification)));
    }
    Ok(v)
}

/// `v ∈ span(gens)`: least-squares residual of `v` against the generators is
/// negligible. The generators must be a free set.
pub fn in_span(v: &GenVector, gens: &[GenVector], cfg: &ClassifierConfig) -> Result<bool> {
    if gens.is_empty() {
        return Ok(v.is_negligible(cfg));
    }
    for g in gens {
        require_same_len(v, g)?;
    }
    let m = GenMatrix::from_columns(v.grid(), v.len(), gens)?;
    let mh = m.conj_transpose();
    let coeffs = solve_unchecked(&mh.matmul(&m)?, &mh.matmul(v.as_matrix())?)?;
    let resid = m.matmul(&coeffs)?.sub(v.as_matrix())?;
    Ok(resid.is_negligible(cfg))
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
    fn determinant_of_idempotent_diagonal_vanishes() {
        let g = grid();
        let c = Idempotent::even(&g).to_scalar();
        let one_c = GenScalar::one(&g).sub(&c).unwrap();
        let a = GenMatrix::diag(&g, &[one_c, c]).unwrap();
        assert!(det(&a).unwrap().same_samples(&GenScalar::zero(&g)));
        assert!(!is_invertible(&a, &cfg()).unwrap().0);
        let b = GenVector::basis(&g, 2, 0);
        assert!(matches!(solve(&a, &b, &cfg()), Err(GnaError::SingularMatrix { .. })));
    }

    #[test]
    fn eps_diagonal_is_invertible_of_order_one() {
        let g = grid();
        let a = GenMatrix::diag(&g, &[GenScalar::eps(&g), GenScalar::one(&g)]).unwrap();
        let (ok, r) = is_invertible(&a, &cfg()).unwrap();
        assert!(ok);
        assert_eq!(r.classification.order(), Some(2));
        let inv = inverse(&a, &cfg()).unwrap();
        assert!(a.matmul(&inv).unwrap().approx_eq(&GenMatrix::identity(&g, 2), &cfg()).unwrap());
    }

    #[test]
    fn inner_products_of_idempotent_pair() {
        let g = grid();
        let c = Idempotent::even(&g).to_scalar();
        let one_c = GenScalar::one(&g).sub(&c).unwrap();
        let v = GenVector::from_entries(&g, &[c.clone(), one_c.clone()]).unwrap();
        assert!(norm_sq(&v).same_samples(&GenScalar::one(&g)));
        assert!(is_free(&v, &cfg()));
        let w = GenVector::from_entries(&g, &[c, GenScalar::zero(&g)]).unwrap();
        assert!(!is_free(&w, &cfg()));

        let ext = extend_to_basis(std::slice::from_ref(&v), 2, &cfg()).unwrap();
        assert_eq!(ext.len(), 1);
        assert!(classify(&inner(&ext[0], &v).unwrap(), &cfg()).classification.is_negligible());
        assert!(is_free(&ext[0], &cfg()));
    }

    #[test]
    fn coordinate_plane_extends_by_third_axis() {
        let g = grid();
        let vs = [GenVector::basis(&g, 3, 0), GenVector::basis(&g, 3, 1)];
        let ext = extend_to_basis(&vs, 3, &cfg()).unwrap();
        assert!(ext[0].same_samples(&GenVector::basis(&g, 3, 2)));
    }

    #[test]
    fn non_free_input_is_rejected() {
        let g = grid();
        let c = Idempotent::even(&g).to_scalar();
        let w = GenVector::from_entries(&g, &[c, GenScalar::zero(&g)]).unwrap();
        assert!(matches!(extend_to_basis(&[w], 2, &cfg()), Err(GnaError::NotFree { .. })));
    }

    #[test]
    fn kernel_vector_of_diagonal() {
        let g = grid();
        let b = GenMatrix::from_f64(&g, 2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        let v = kernel_free_vector(&b, &cfg()).unwrap();
        assert!(v.same_samples(&GenVector::basis(&g, 2, 0)));
        let a = GenMatrix::identity(&g, 2);
        assert!(matches!(kernel_free_vector(&a, &cfg()), Err(GnaError::Precondition(_))));
    }

    #[test]
    fn kernel_vector_of_idempotent_example() {
        let g = grid();
        let c = Idempotent::even(&g).to_scalar();
        let one_c = GenScalar::one(&g).sub(&c).unwrap();
        let a = GenMatrix::diag(&g, &[one_c, c.clone()]).unwrap();
        let b = a.shift(&c).unwrap();
        let v = kernel_free_vector(&b, &cfg()).unwrap();
        assert!(b.matvec(&v).unwrap().is_negligible(&cfg()));
    }

    #[test]
    fn realify_takes_imaginary_part_when_needed() {
        let g = grid();
        let a = GenMatrix::from_f64(&g, 2, 2, &[0.0, 0.0, 0.0, 1.0]).unwrap();
        let z = GenVector::from_entries(&g, &[GenScalar::constant_cx(&g, 0.0, 1.0), GenScalar::zero(&g)]).unwrap();
        let v = realify_kernel_vector(&z, &a, &cfg()).unwrap();
        assert!(v.same_samples(&GenVector::basis(&g, 2, 0)));
    }

    #[test]
    fn span_membership() {
        let g = grid();
        let gens = [GenVector::basis(&g, 3, 0), GenVector::basis(&g, 3, 1)];
        let inside = GenVector::from_f64(&g, &[2.0, -1.0, 0.0]).unwrap();
        let outside = GenVector::from_f64(&g, &[0.0, 0.0, 1.0]).unwrap();
        assert!(in_span(&inside, &gens, &cfg()).unwrap());
        assert!(!in_span(&outside, &gens, &cfg()).unwrap());
    }
}
