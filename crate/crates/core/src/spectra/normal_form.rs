use rug::Float;

use crate::classify::{classify, ClassifierConfig};
use crate::dense::{complete_basis, orthonormalize, Mat};
use crate::error::{GnaError, Result};
use crate::linalg::{is_invertible, map_cached, GenMatrix};
use crate::num::{pow2, Cx, Scalar};
use crate::scalar::{GenScalar, Samples, ScalarKind};
use crate::symplectic::{standard_j, symplectomorphism_to_standard, SymplecticForm};

use super::tuple::{skew_symmetrize, sorted_eigen, times_i};

/// `VᵗAV = diag(B_1, …, B_k, 0, …, 0)` with `B_j = [[0, −λ_j], [λ_j, 0]]`.
#[derive(Clone, Debug)]
pub struct SkewNormalForm {
    pub v: GenMatrix,
    pub lambdas: Vec<GenScalar>,
    pub zero_block_count: usize,
    /// One entry per block whose `λ` is neither negligible nor strictly
    /// nonzero; such blocks are kept.
    pub warnings: Vec<String>,
}

struct SampleForm {
    lambdas: Vec<Float>,
    v: Mat<Float>,
}

/// Pairs `(λ, x, y)` and an orthonormal basis of the rest, in the
/// coordinates of `s`.
type Split = (Vec<(Float, Vec<Float>, Vec<Float>)>, Vec<Vec<Float>>);

fn split(s: &Mat<Float>, top_norm: &Float, prec: u32) -> Split {
    let n = s.rows();
    let identity = || (0..n).map(|j| (0..n).map(|i| Float::with_val(prec, u8::from(i == j))).collect()).collect();
    let norm = s.frob();
    if n < 2 || norm <= Float::with_val(prec, top_norm * pow2(-(prec as i64) + 32, prec)) {
        return (Vec::new(), identity());
    }
    let tau = Float::with_val(prec, &norm * pow2(-(prec as i64) / 3, prec));
    let (alpha, u) = sorted_eigen(&times_i(s, prec), prec);
    let sqrt2 = Float::with_val(prec, 2).sqrt();
    let mut q: Vec<Vec<Float>> = Vec::new();
    let mut pairs = Vec::new();
    for (j, a) in alpha.iter().enumerate() {
        if *a <= tau || pairs.len() == n / 2 {
            break;
        }
        let col: Vec<Cx> = u.col(j);
        let x: Vec<Float> = col.iter().map(|z| Float::with_val(prec, &z.re * &sqrt2)).collect();
        let y: Vec<Float> = col.iter().map(|z| Float::with_val(prec, &z.im * &sqrt2)).collect();
        let mut cand = q.clone();
        cand.push(x);
        cand.push(y);
        let ortho = orthonormalize(&cand, prec);
        if ortho.len() != q.len() + 2 {
            continue;
        }
        let x = ortho[q.len()].clone();
        let mut y = ortho[q.len() + 1].clone();
        // Orient so that yᵗ S x > 0.
        let sx = s.matmul(&Mat::from_vec(n, 1, x.clone()));
        let mut ysx = Float::new(prec);
        for (yi, v) in y.iter().zip(sx.data()) {
            ysx.add_mul(yi, v);
        }
        if ysx.is_sign_negative() {
            y.iter_mut().for_each(|c| *c = -c.clone());
        }
        q = ortho;
        let last = q.len() - 1;
        q[last] = y.clone();
        pairs.push((a.clone(), x, y));
    }
    let rest = complete_basis(&q, n, prec);
    if rest.is_empty() {
        return (pairs, rest);
    }
    let w = Mat::from_cols(n, &rest);
    let c = w.transpose().matmul(s).matmul(&w);
    let (sub_pairs, sub_rest) = split(&c, top_norm, prec);
    let lift = |v: &Vec<Float>| w.matmul(&Mat::from_vec(v.len(), 1, v.clone())).data().to_vec();
    for (l, x, y) in &sub_pairs {
        pairs.push((l.clone(), lift(x), lift(y)));
    }
    (pairs, sub_rest.iter().map(lift).collect())
}

fn sample_form(s: &Mat<Float>, prec: u32) -> SampleForm {
    let n = s.rows();
    let (mut pairs, rest) = split(s, &s.frob(), prec);
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let mut cols: Vec<Vec<Float>> = Vec::with_capacity(n);
    let mut lambdas = Vec::with_capacity(n / 2);
    for (l, x, y) in pairs {
        lambdas.push(l);
        cols.push(x);
        cols.push(y);
    }
    cols.extend(rest);
    lambdas.resize(n / 2, Float::new(prec));
    SampleForm { lambdas, v: Mat::from_cols(n, &cols) }
}

fn block_form(grid: &crate::grid::Grid, n: usize, lambdas: &[GenScalar]) -> Result<GenMatrix> {
    let zero = GenScalar::zero(grid);
    GenMatrix::from_fn(grid, n, n, |i, j| {
        let (bi, bj) = (i / 2, j / 2);
        if bi == bj && bi < lambdas.len() && i != j {
            if i < j {
                lambdas[bi].neg()
            } else {
                lambdas[bi].clone()
            }
        } else {
            zero.clone()
        }
    })
}

/// Orthogonal `V` bringing a real skew-symmetric matrix to block form.
///
/// Per sample, pairs come from eigenvectors `u = x + iy` of `iA` with
/// positive eigenvalue; eigenvalues too small to separate reliably are
/// handled by recursing on the compression of `A` to the complement.
/// Blocks whose `λ` is negligible become zero blocks.
pub fn skew_normal_form(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<SkewNormalForm> {
    if a.kind() != ScalarKind::Real {
        return Err(GnaError::Precondition("skew normal form needs a real matrix".into()));
    }
    let s = skew_symmetrize(a, cfg)?;
    let n = s.rows();
    let grid = s.grid();
    let p = grid.prec();
    let forms = map_cached(s.real_samples().expect("real"), |m| {
        let f = sample_form(m, p);
        (f.lambdas, f.v)
    });
    let mut lambdas = Vec::new();
    let mut warnings = Vec::new();
    for j in 0..n / 2 {
        let l = GenScalar::from_samples(grid, Samples::Real(forms.iter().map(|f| f.0[j].clone()).collect()));
        let r = classify(&l, cfg);
        if r.classification.is_negligible() {
            break;
        }
        if !r.classification.is_strictly_nonzero() {
            warnings.push(format!("λ_{} is {}", j + 1, r.classification));
        }
        lambdas.push(l);
    }
    let v = GenMatrix::from_real_samples(grid, forms.into_iter().map(|f| f.1).collect())?;
    let vt = v.transpose();
    let r = vt.matmul(&v)?.sub(&GenMatrix::identity(grid, n))?.negligibility(cfg);
    if !r.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!("VᵗV − I is {}", r.classification)));
    }
    let r = vt.matmul(a)?.matmul(&v)?.sub(&block_form(grid, n, &lambdas)?)?.negligibility(cfg);
    if !r.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!("VᵗAV minus the block form is {}", r.classification)));
    }
    let zero_block_count = n - 2 * lambdas.len();
    Ok(SkewNormalForm { v, lambdas, zero_block_count, warnings })
}

/// `V` with `VᵗAV = J` for a non-degenerate skew-symmetric `A`, via a
/// symplectic basis of the form with Gramian `A`.
pub fn skew_to_standard_j(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<GenMatrix> {
    let s = skew_symmetrize(a, cfg)?;
    let (ok, report) = is_invertible(&s, cfg)?;
    if !ok {
        return Err(GnaError::SingularMatrix { report: Box::new(report) });
    }
    let form = SymplecticForm::new(s, cfg)?;
    let v = symplectomorphism_to_standard(&form, cfg)?;
    let j = standard_j(a.grid(), a.rows() / 2);
    let r = v.transpose().matmul(a)?.matmul(&v)?.sub(&j)?.negligibility(cfg);
    if !r.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!("VᵗAV − J is {}", r.classification)));
    }
    Ok(v)
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
    fn rotation_generator_block() {
        let g = grid();
        let a = GenMatrix::from_f64(&g, 2, 2, &[0.0, -3.0, 3.0, 0.0]).unwrap();
        let nf = skew_normal_form(&a, &cfg()).unwrap();
        assert_eq!(nf.lambdas.len(), 1);
        assert!((nf.lambdas[0].to_f64()[0] - 3.0).abs() < 1e-30);
        assert_eq!(nf.zero_block_count, 0);
    }

    #[test]
    fn zero_matrix_is_all_zero_blocks() {
        let g = grid();
        let nf = skew_normal_form(&GenMatrix::zeros(&g, 3, 3), &cfg()).unwrap();
        assert!(nf.lambdas.is_empty());
        assert_eq!(nf.zero_block_count, 3);
        assert!(nf.v.same_samples(&GenMatrix::identity(&g, 3)));
    }

    #[test]
    fn mixed_scales_and_odd_size() {
        let g = grid();
        let e = GenScalar::eps(&g);
        let z = GenScalar::zero(&g);
        let one = GenScalar::one(&g);
        let rows = vec![
            vec![z.clone(), one.neg(), e.clone()],
            vec![one.clone(), z.clone(), e.clone()],
            vec![e.neg(), e.neg(), z.clone()],
        ];
        let a = GenMatrix::from_rows(&g, &rows).unwrap();
        let nf = skew_normal_form(&a, &cfg()).unwrap();
        assert_eq!(nf.zero_block_count, 1);
    }

    #[test]
    fn standard_j_for_scaled_generator() {
        let g = grid();
        let a = GenMatrix::from_f64(&g, 2, 2, &[0.0, -2.0, 2.0, 0.0]).unwrap();
        skew_to_standard_j(&a, &cfg()).unwrap();
    }

    #[test]
    fn idempotent_block_is_degenerate() {
        let g = grid();
        let c = Idempotent::even(&g).to_scalar();
        let z = GenScalar::zero(&g);
        let a = GenMatrix::from_rows(&g, &[vec![z.clone(), c.neg()], vec![c.clone(), z]]).unwrap();
        assert!(matches!(skew_to_standard_j(&a, &cfg()), Err(GnaError::SingularMatrix { .. })));
        let nf = skew_normal_form(&a, &cfg()).unwrap();
        assert_eq!(nf.warnings.len(), 1);
    }
}
