use gna_core::classify::{classify, ClassifierConfig};
use gna_core::error::GnaError;
use gna_core::grid::{make_grid, Grid, GridKind};
use gna_core::idempotent::Idempotent;
use gna_core::linalg::{GenMatrix, GenVector};
use gna_core::scalar::GenScalar;
use gna_core::spectra::{
    char_poly_roots_distinguished, eigenpair_from_root, hermitian_eigentuple, hermitize,
    representative_stability_check, skew_eigentuple, skew_normal_form, skew_symmetrize, skew_to_standard_j, EigenKind,
};
use gna_core::symplectic::standard_j;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid() -> Grid {
    make_grid(GridKind::Dyadic, 4, 40).unwrap()
}

fn cfg() -> ClassifierConfig {
    ClassifierConfig::default()
}

fn negligible(a: &GenScalar) -> bool {
    classify(a, &cfg()).classification.is_negligible()
}

#[test]
fn idempotent_diagonal_eigenvectors() {
    let g = grid();
    let c = Idempotent::even(&g).to_scalar();
    let one_c = GenScalar::one(&g).sub(&c).unwrap();
    let a = GenMatrix::diag(&g, &[one_c.clone(), c.clone()]).unwrap();
    let x = eigenpair_from_root(&a, &one_c, true, &cfg()).unwrap();
    assert!(x.same_samples(&GenVector::basis(&g, 2, 0)));
    let y = eigenpair_from_root(&a, &c, true, &cfg()).unwrap();
    assert!(a.matvec(&y).unwrap().sub(&y.scale(&c).unwrap()).unwrap().is_negligible(&cfg()));

    let t = char_poly_roots_distinguished(&a, EigenKind::Hermitian, &cfg()).unwrap();
    assert!(t.values[0].same_samples(&GenScalar::one(&g)));
    assert!(t.values[1].same_samples(&GenScalar::zero(&g)));
}

#[test]
fn largest_eigenvector_matches_classical() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let m = DMatrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0f64));
    let s = (&m + m.transpose()) * 0.5;
    let eig = s.clone().symmetric_eigen();
    let imax = eig.eigenvalues.imax();
    let a = GenMatrix::from_f64(&g, 4, 4, s.as_slice()).unwrap();
    let (t, _) = hermitian_eigentuple(&a, &cfg()).unwrap();
    let x = eigenpair_from_root(&a, &t.values[0], true, &cfg()).unwrap();
    let xs = &x.to_f64()[0];
    let dot: f64 = (0..4).map(|i| xs[i] * eig.eigenvectors[(i, imax)]).sum();
    assert!((dot.abs() - 1.0).abs() < 1e-9);
}

#[test]
fn eps_split_diagonal_keeps_order() {
    let g = grid();
    let e = GenScalar::eps(&g);
    let one = GenScalar::one(&g);
    let a = GenMatrix::diag(&g, &[one.add(&e).unwrap(), one.sub(&e).unwrap()]).unwrap();
    let (t, _) = hermitian_eigentuple(&a, &cfg()).unwrap();
    assert!(negligible(&t.values[0].sub(&one.add(&e).unwrap()).unwrap()));
    assert!(negligible(&t.values[1].sub(&one.sub(&e).unwrap()).unwrap()));
}

#[test]
fn skew_spectra() {
    let g = grid();
    let t = skew_eigentuple(&standard_j(&g, 2), &cfg()).unwrap();
    let i = GenScalar::constant_cx(&g, 0.0, 1.0);
    for (k, v) in t.values.iter().enumerate() {
        let want = if k < 2 { i.clone() } else { i.neg() };
        assert!(negligible(&v.sub(&want).unwrap()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let vals: Vec<f64> = (0..9).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let m = GenMatrix::from_f64(&g, 3, 3, &vals).unwrap();
    let s = m.sub(&m.transpose()).unwrap();
    assert!(negligible(&skew_eigentuple(&s, &cfg()).unwrap().values[1]));
}

#[test]
fn symmetry_mismatch_is_reported() {
    let g = grid();
    let sym = GenMatrix::from_f64(&g, 2, 2, &[1.0, 2.0, 2.0, 1.0]).unwrap();
    assert!(matches!(skew_symmetrize(&sym, &cfg()), Err(GnaError::Symmetry(_))));
    let skew = GenMatrix::from_f64(&g, 2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
    assert!(matches!(hermitize(&skew, &cfg()), Err(GnaError::Symmetry(_))));
    assert!(skew_symmetrize(&skew, &cfg()).unwrap().same_samples(&skew));
    assert!(matches!(char_poly_roots_distinguished(&sym, EigenKind::General, &cfg()), Err(GnaError::Unsupported(_))));
}

#[test]
fn normal_form_matches_singular_values() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let m = DMatrix::from_fn(6, 6, |_, _| rng.gen_range(-1.0..1.0f64));
    let s = &m - m.transpose();
    let mut sv: Vec<f64> = s.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let a = GenMatrix::from_f64(&g, 6, 6, s.as_slice()).unwrap();
    let nf = skew_normal_form(&a, &cfg()).unwrap();
    for (j, l) in nf.lambdas.iter().enumerate() {
        // Singular values of a skew matrix come in equal pairs.
        assert!((l.to_f64()[0] - sv[2 * j]).abs() < 1e-9);
    }
}

#[test]
fn scaled_rotation_reduces_to_j() {
    let g = grid();
    let a = GenMatrix::from_f64(&g, 2, 2, &[0.0, -2.0, 2.0, 0.0]).unwrap();
    let v = skew_to_standard_j(&a, &cfg()).unwrap();
    let x = v.to_f64();
    // Columns e_1 = (0, −1/2), f_1 = (1, 0).
    assert_eq!(x[0], vec![vec![0.0, 1.0], vec![-0.5, 0.0]]);
    let vj = skew_to_standard_j(&standard_j(&g, 2), &cfg()).unwrap();
    let r = vj.transpose().matmul(&standard_j(&g, 2)).unwrap().matmul(&vj).unwrap().sub(&standard_j(&g, 2)).unwrap();
    assert!(r.is_negligible(&cfg()));
}

#[test]
fn identical_inputs_have_zero_differences() {
    let g = grid();
    let a = GenMatrix::from_f64(&g, 3, 3, &[2.0, 1.0, 0.0, 1.0, 3.0, -1.0, 0.0, -1.0, 1.0]).unwrap();
    let r = representative_stability_check(&a, &a, EigenKind::Hermitian, &cfg()).unwrap();
    assert!(r.all_negligible);
    assert!(r.differences.iter().all(|d| d.classification.is_negligible()));
}
