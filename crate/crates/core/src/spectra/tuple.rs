use rug::Float;
use serde::Serialize;

use crate::classify::{classify, AsymptoticReport, ClassifierConfig};
use crate::dense::{hermitian_eigen, Mat};
use crate::error::{GnaError, Result};
use crate::grid::same_grid;
use crate::linalg::{det, map_cached, GenMatrix, MatSamples};
use crate::num::{cmp_float, fix_phase, pow2, Cx, Scalar};
use crate::scalar::{GenScalar, Samples, ScalarKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TupleKind {
    /// Real values, non-increasing.
    HermitianReal,
    /// `±iλ` pairs, imaginary parts non-increasing.
    SkewImaginary,
}

/// Which distinguished tuple to compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenKind {
    Hermitian,
    Skew,
    General,
}

#[derive(Clone, Debug)]
pub struct EigenTuple {
    pub kind: TupleKind,
    pub values: Vec<GenScalar>,
}

fn symmetry_defect(a: &GenMatrix, b: &GenMatrix, what: &str, cfg: &ClassifierConfig) -> Result<()> {
    let r = a.add(b)?.negligibility(cfg);
    if !r.classification.is_negligible() {
        return Err(GnaError::Symmetry(format!("{what} is {}, not negligible", r.classification)));
    }
    Ok(())
}

fn require_square(a: &GenMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(GnaError::Shape(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    Ok(())
}

/// `(A + A*)/2`, after checking `A − A*` is negligible.
pub fn hermitize(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<GenMatrix> {
    require_square(a)?;
    let ah = a.conj_transpose();
    symmetry_defect(a, &ah.neg(), "A − A*", cfg)?;
    Ok(a.add(&ah)?.scale_f64(0.5))
}

/// `(A − Aᵗ)/2`, after checking `A + Aᵗ` is negligible.
pub fn skew_symmetrize(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<GenMatrix> {
    require_square(a)?;
    let at = a.transpose();
    symmetry_defect(a, &at, "A + Aᵗ", cfg)?;
    Ok(a.sub(&at)?.scale_f64(0.5))
}

/// Eigenvalues descending (ties keep solver order) and phase-fixed
/// eigenvector columns.
pub(crate) fn sorted_eigen<T: Scalar>(m: &Mat<T>, prec: u32) -> (Vec<Float>, Mat<T>) {
    let n = m.rows();
    let (vals, vecs) = hermitian_eigen(m, prec);
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| cmp_float(&vals[b], &vals[a]));
    let mut u = Mat::<T>::zeros(n, n, prec);
    for (new, &old) in idx.iter().enumerate() {
        let mut c = vecs.col(old);
        fix_phase(&mut c);
        u.set_col(new, &c);
    }
    (idx.iter().map(|&i| vals[i].clone()).collect(), u)
}

fn real_values(grid: &crate::grid::Grid, per_sample: &[Vec<Float>], n: usize) -> Vec<GenScalar> {
    (0..n)
        .map(|k| GenScalar::from_samples(grid, Samples::Real(per_sample.iter().map(|v| v[k].clone()).collect())))
        .collect()
}

/// Distinguished eigenvalues `λ_1 ≥ … ≥ λ_n` of a Hermitian matrix and a
/// unitary `U` with `U*AU` diagonal up to negligibility.
pub fn hermitian_eigentuple(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<(EigenTuple, GenMatrix)> {
    let h = hermitize(a, cfg)?;
    let n = h.rows();
    let p = h.grid().prec();
    let (vals, u) = match h.samples() {
        MatSamples::Real(v) => {
            let out = map_cached(v, |m| sorted_eigen(m, p));
            let (vals, us): (Vec<_>, Vec<_>) = out.into_iter().unzip();
            (vals, GenMatrix::from_real_samples(h.grid(), us)?)
        }
        MatSamples::Complex(v) => {
            let out = map_cached(v, |m| sorted_eigen(m, p));
            let (vals, us): (Vec<_>, Vec<_>) = out.into_iter().unzip();
            (vals, GenMatrix::from_complex_samples(h.grid(), us)?)
        }
    };
    let values = real_values(h.grid(), &vals, n);
    let d = GenMatrix::diag(h.grid(), &values)?;
    let uh = u.conj_transpose();
    let r = uh.matmul(&h)?.matmul(&u)?.sub(&d)?.negligibility(cfg);
    if !r.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!("U*AU − diag is {}", r.classification)));
    }
    let r = uh.matmul(&u)?.sub(&GenMatrix::identity(h.grid(), n))?.negligibility(cfg);
    if !r.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!("U*U − I is {}", r.classification)));
    }
    Ok((EigenTuple { kind: TupleKind::HermitianReal, values }, u))
}

/// `iS` for a real matrix `S`.
pub(crate) fn times_i(s: &Mat<Float>, prec: u32) -> Mat<Cx> {
    s.map(|x| Cx::new(Float::new(prec), x.clone()))
}

/// Distinguished eigenvalues of a real skew-symmetric matrix.
///
/// The eigenvalues `α_1 ≥ … ≥ α_n` of the Hermitian `iA` are paired as
/// `λ_j = (α_j − α_{n+1−j})/2`, and the tuple is
/// `(iλ_1, …, iλ_m, [0], −iλ_m, …, −iλ_1)` with `m = ⌊n/2⌋`.
pub fn skew_eigentuple(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<EigenTuple> {
    if a.kind() != ScalarKind::Real {
        return Err(GnaError::Precondition("skew eigenvalues need a real matrix".into()));
    }
    let s = skew_symmetrize(a, cfg)?;
    let n = s.rows();
    let p = s.grid().prec();
    let samples = s.real_samples().expect("real");
    let lambdas: Vec<Vec<Float>> = map_cached(samples, |m| {
        let (alpha, _) = sorted_eigen(&times_i(m, p), p);
        (0..n / 2).map(|j| Float::with_val(p, &alpha[j] - &alpha[n - 1 - j]) / 2u32).collect()
    });
    let grid = s.grid();
    let zero = Float::new(p);
    let im = |k: usize, sign: bool| {
        GenScalar::from_fn_cx(grid, |i| {
            let l = lambdas[i][k].clone();
            Cx::new(zero.clone(), if sign { l } else { -l })
        })
    };
    let m = n / 2;
    let mut values: Vec<GenScalar> = (0..m).map(|k| im(k, true)).collect();
    if n % 2 == 1 {
        values.push(GenScalar::constant_cx(grid, 0.0, 0.0));
    }
    values.extend((0..m).rev().map(|k| im(k, false)));
    Ok(EigenTuple { kind: TupleKind::SkewImaginary, values })
}

/// Distinguished tuple for the given kind, verified against the
/// characteristic polynomial at probe points: `det(A − λI) − Π(λ − λ_k)`
/// must be negligible for `λ ∈ {0, ±1, 2}`, plus `±i` for skew input.
pub fn char_poly_roots_distinguished(a: &GenMatrix, kind: EigenKind, cfg: &ClassifierConfig) -> Result<EigenTuple> {
    let tuple = match kind {
        EigenKind::Hermitian => hermitian_eigentuple(a, cfg)?.0,
        EigenKind::Skew => skew_eigentuple(a, cfg)?,
        EigenKind::General => {
            return Err(GnaError::Unsupported(
                "distinguished eigenvalues are only defined for Hermitian and skew-symmetric matrices".into(),
            ))
        }
    };
    let grid = a.grid();
    let mut probes: Vec<(f64, f64)> = vec![(0.0, 0.0), (1.0, 0.0), (-1.0, 0.0), (2.0, 0.0)];
    if kind == EigenKind::Skew {
        probes.extend([(0.0, 1.0), (0.0, -1.0)]);
    }
    for (re, im) in probes {
        let l = if im == 0.0 { GenScalar::constant(grid, re) } else { GenScalar::constant_cx(grid, re, im) };
        let lhs = det(&a.shift(&l)?)?;
        let mut rhs = GenScalar::one(grid);
        for v in &tuple.values {
            rhs = rhs.mul(&l.sub(v)?)?;
        }
        let r = classify(&lhs.sub(&rhs)?, cfg);
        if !r.classification.is_negligible() {
            return Err(GnaError::PostconditionFailed(format!(
                "characteristic polynomial differs from the product at λ = {re}{:+}i: {}",
                im, r.classification
            )));
        }
    }
    Ok(tuple)
}

#[derive(Clone, Debug, Serialize)]
pub struct StabilityReport {
    pub kind: EigenKind,
    /// Classification of the largest entry of `A − B`.
    pub perturbation: AsymptoticReport,
    /// Classification of `λ_k(A) − λ_k(B)` for each index.
    pub differences: Vec<AsymptoticReport>,
    pub all_negligible: bool,
    /// `max_k |λ_k − β_k| ≤ ‖A_ε − B_ε‖₂` on every sample; only checked when
    /// both inputs are exactly Hermitian samplewise.
    pub weyl_bound_holds: Option<bool>,
}

fn exactly_hermitian(a: &GenMatrix) -> bool {
    a.same_samples(&a.conj_transpose())
}

/// Compares the distinguished tuples of two representatives.
pub fn representative_stability_check(
    a: &GenMatrix,
    b: &GenMatrix,
    kind: EigenKind,
    cfg: &ClassifierConfig,
) -> Result<StabilityReport> {
    if !same_grid(a.grid(), b.grid()) {
        return Err(GnaError::GridMismatch);
    }
    let perturbation = a.sub(b)?.negligibility(cfg);
    let (ta, tb) = match kind {
        EigenKind::Hermitian => (hermitian_eigentuple(a, cfg)?.0, hermitian_eigentuple(b, cfg)?.0),
        EigenKind::Skew => (skew_eigentuple(a, cfg)?, skew_eigentuple(b, cfg)?),
        EigenKind::General => {
            return Err(GnaError::Unsupported("stability is only checked for Hermitian and skew input".into()))
        }
    };
    let mut differences = Vec::with_capacity(ta.values.len());
    for (x, y) in ta.values.iter().zip(&tb.values) {
        differences.push(classify(&x.sub(y)?, cfg));
    }
    let all_negligible = differences.iter().all(|r| r.classification.is_negligible());

    let weyl_bound_holds = if kind == EigenKind::Hermitian && exactly_hermitian(a) && exactly_hermitian(b) {
        Some(weyl_holds(a, b, &ta, &tb)?)
    } else {
        None
    };
    Ok(StabilityReport { kind, perturbation, differences, all_negligible, weyl_bound_holds })
}

fn weyl_holds(a: &GenMatrix, b: &GenMatrix, ta: &EigenTuple, tb: &EigenTuple) -> Result<bool> {
    let p = a.grid().prec();
    let diff = a.sub(b)?;
    let norms: Vec<Float> = match diff.samples() {
        MatSamples::Real(v) => map_cached(v, |m| spectral_norm(&hermitian_eigen(m, p).0, p)),
        MatSamples::Complex(v) => map_cached(v, |m| spectral_norm(&hermitian_eigen(m, p).0, p)),
    };
    let scale = |m: &GenMatrix| -> Vec<Float> {
        match m.samples() {
            MatSamples::Real(v) => v.iter().map(|x| x.frob()).collect(),
            MatSamples::Complex(v) => v.iter().map(|x| x.frob()).collect(),
        }
    };
    let (sa, sb) = (scale(a), scale(b));
    let slack_unit = pow2(-(p as i64) + 16, p);
    for i in 0..a.grid().len() {
        let mut worst = Float::new(p);
        for (x, y) in ta.values.iter().zip(&tb.values) {
            let d = Float::with_val(p, &x.real_samples().expect("real")[i] - &y.real_samples().expect("real")[i]).abs();
            if d > worst {
                worst = d;
            }
        }
        let slack = Float::with_val(p, &sa[i] + &sb[i]) * &slack_unit;
        if worst > Float::with_val(p, &norms[i] + &slack) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn spectral_norm(values: &[Float], p: u32) -> Float {
    values.iter().fold(Float::new(p), |acc, x| {
        let a = x.clone().abs();
        if a > acc {
            a
        } else {
            acc
        }
    })
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
    fn diagonal_hermitian_tuple() {
        let g = grid();
        let a = GenMatrix::from_f64(&g, 2, 2, &[1.0, 0.0, 0.0, 2.0]).unwrap();
        let (t, u) = hermitian_eigentuple(&a, &cfg()).unwrap();
        assert_eq!(t.values[0].to_f64()[0], 2.0);
        assert_eq!(t.values[1].to_f64()[0], 1.0);
        assert_eq!(u.to_f64()[0], vec![vec![0.0, 1.0], vec![1.0, 0.0]]);
    }

    #[test]
    fn eps_split_diagonal_keeps_order() {
        let g = grid();
        let e = GenScalar::eps(&g);
        let one = GenScalar::one(&g);
        let a = GenMatrix::diag(&g, &[one.add(&e).unwrap(), one.sub(&e).unwrap()]).unwrap();
        let (t, _) = hermitian_eigentuple(&a, &cfg()).unwrap();
        assert!(t.values[0].same_samples(&one.add(&e).unwrap()));
    }

    #[test]
    fn skew_pairs_and_odd_zero() {
        let g = grid();
        let a = GenMatrix::from_f64(&g, 2, 2, &[0.0, -3.0, 3.0, 0.0]).unwrap();
        let t = skew_eigentuple(&a, &cfg()).unwrap();
        let (re, im) = t.values[0].to_f64_pairs()[0];
        assert!(re == 0.0 && (im - 3.0).abs() < 1e-30);
        let b = GenMatrix::from_f64(&g, 3, 3, &[0.0, 1.0, 2.0, -1.0, 0.0, 3.0, -2.0, -3.0, 0.0]).unwrap();
        let t = skew_eigentuple(&b, &cfg()).unwrap();
        assert!(classify(&t.values[1], &cfg()).classification.is_negligible());
        assert!(skew_symmetrize(&GenMatrix::identity(&g, 2), &cfg()).is_err());
    }

    #[test]
    fn char_poly_of_idempotent_example() {
        let g = grid();
        let c = Idempotent::even(&g).to_scalar();
        let one_c = GenScalar::one(&g).sub(&c).unwrap();
        let a = GenMatrix::diag(&g, &[one_c, c]).unwrap();
        let t = char_poly_roots_distinguished(&a, EigenKind::Hermitian, &cfg()).unwrap();
        assert!(t.values[0].same_samples(&GenScalar::one(&g)));
        assert!(t.values[1].same_samples(&GenScalar::zero(&g)));
        assert!(matches!(char_poly_roots_distinguished(&a, EigenKind::General, &cfg()), Err(GnaError::Unsupported(_))));
    }

    #[test]
    fn identical_representatives_are_stable() {
        let g = grid();
        let a = GenMatrix::from_f64(&g, 2, 2, &[2.0, 1.0, 1.0, 3.0]).unwrap();
        let r = representative_stability_check(&a, &a, EigenKind::Hermitian, &cfg()).unwrap();
        assert!(r.all_negligible);
        assert_eq!(r.weyl_bound_holds, Some(true));
        let b = GenMatrix::from_f64(&g, 2, 2, &[2.5, 1.0, 1.0, 3.0]).unwrap();
        let r = representative_stability_check(&a, &b, EigenKind::Hermitian, &cfg()).unwrap();
        assert!(!r.all_negligible);
        assert_eq!(r.weyl_bound_holds, Some(true));
    }
}
