use gna_core::classify::ClassifierConfig;
use gna_core::error::GnaError;
use gna_core::grid::{make_grid, Grid, GridKind};
use gna_core::linalg::{is_free_set, GenMatrix, GenVector};
use gna_core::scalar::GenScalar;
use gna_core::symplectic::{
    annihilator, classify_submodule, extend_symplectic_basis, is_symplectic_matrix, lagrangian_standard_form,
    standard_form, standard_j, symplectic_basis, symplectomorphism_to_standard, PartialBasis, Submodule, SubmoduleKind,
    SymplecticForm,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn grid() -> Grid {
    make_grid(GridKind::Dyadic, 4, 40).unwrap()
}

fn cfg() -> ClassifierConfig {
    ClassifierConfig::default()
}

fn random_form(g: &Grid, rng: &mut ChaCha8Rng, n: usize) -> SymplecticForm {
    let dim = 2 * n;
    let vals: Vec<f64> =
        (0..dim * dim).map(|i| rng.gen_range(-1.0..1.0) + if i % (dim + 1) == 0 { 2.0 } else { 0.0 }).collect();
    let r = GenMatrix::from_f64(g, dim, dim, &vals).unwrap();
    let gram = r.transpose().matmul(&standard_j(g, n)).unwrap().matmul(&r).unwrap();
    SymplecticForm::new(gram, &cfg()).unwrap()
}

#[test]
fn standard_form_pairs_like_the_cotangent_form() {
    let g = grid();
    let form = standard_form(&g, 2).unwrap();
    // σ((x, ξ), (y, η)) = ⟨y, ξ⟩ − ⟨x, η⟩
    let v = GenVector::from_f64(&g, &[1.0, 2.0, 3.0, 4.0]).unwrap();
    let w = GenVector::from_f64(&g, &[-1.0, 0.5, 2.0, -3.0]).unwrap();
    let expected = (-3.0 + 0.5 * 4.0) - (1.0 * 2.0 + 2.0 * -3.0);
    assert_eq!(form.apply(&v, &w).unwrap().to_f64()[0], expected);
    assert!(form.apply(&v, &v).unwrap().same_samples(&GenScalar::zero(&g)));
}

#[test]
fn degenerate_gramian_is_rejected() {
    let g = grid();
    let gram = GenMatrix::from_f64(&g, 4, 4, &[0.0; 16]).unwrap();
    assert!(matches!(SymplecticForm::new(gram, &cfg()), Err(GnaError::InvalidForm(_))));
}

#[test]
fn eight_dimensional_random_form() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    let form = random_form(&g, &mut rng, 4);
    let b = symplectic_basis(&form, &cfg()).unwrap();
    b.verify(&form, &cfg()).unwrap();
    let m = symplectomorphism_to_standard(&form, &cfg()).unwrap();
    let r = m.transpose().matmul(form.gram()).unwrap().matmul(&m).unwrap().sub(&standard_j(&g, 4)).unwrap();
    assert!(r.is_negligible(&cfg()));
}

#[test]
fn one_standard_pair_completes() {
    let g = grid();
    let form = standard_form(&g, 2).unwrap();
    let partial = PartialBasis { e: vec![(0, GenVector::basis(&g, 4, 0))], f: vec![(0, GenVector::basis(&g, 4, 2))] };
    let b = extend_symplectic_basis(&form, &partial, &cfg()).unwrap();
    b.verify(&form, &cfg()).unwrap();
}

#[test]
fn violated_partial_relations_are_reported() {
    let g = grid();
    let form = standard_form(&g, 2).unwrap();
    let partial = PartialBasis { e: vec![(0, GenVector::basis(&g, 4, 0))], f: vec![(0, GenVector::basis(&g, 4, 3))] };
    match extend_symplectic_basis(&form, &partial, &cfg()) {
        Err(GnaError::Precondition(msg)) => assert!(msg.contains("f_1"), "{msg}"),
        other => panic!("expected a precondition error, got {other:?}"),
    }
}

#[test]
fn symplectic_pair_splits_the_space() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let form = random_form(&g, &mut rng, 3);
    let b = symplectic_basis(&form, &cfg()).unwrap();
    let u = Submodule::new(&g, 6, vec![b.e[0].clone(), b.f[0].clone()], &cfg()).unwrap();
    assert_eq!(classify_submodule(&form, &u, &cfg()).unwrap().kind, SubmoduleKind::Symplectic);
    let ann = annihilator(&form, &u, &cfg()).unwrap();
    assert_eq!(ann.rank(), 4);
    let all: Vec<GenVector> = u.generators().iter().chain(ann.generators()).cloned().collect();
    assert!(is_free_set(&all, &cfg()).unwrap());
    for v in ann.generators() {
        for w in u.generators() {
            assert!(form.apply(v, w).unwrap().to_f64().iter().all(|x| x.abs() < 1e-100));
        }
    }
}

#[test]
fn annihilator_is_an_involution() {
    let g = grid();
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    let form = random_form(&g, &mut rng, 2);
    let b = symplectic_basis(&form, &cfg()).unwrap();
    for gens in [vec![b.e[0].clone()], vec![b.e[0].clone(), b.f[1].clone()], vec![b.e[1].clone(), b.f[1].clone()]] {
        let u = Submodule::new(&g, 4, gens, &cfg()).unwrap();
        let back = annihilator(&form, &annihilator(&form, &u, &cfg()).unwrap(), &cfg()).unwrap();
        assert_eq!(back.rank(), u.rank());
        for v in u.generators() {
            assert!(back.contains(v, &cfg()).unwrap());
        }
        for v in back.generators() {
            assert!(u.contains(v, &cfg()).unwrap());
        }
    }
}

#[test]
fn graph_of_symmetric_matrix_is_lagrangian() {
    let g = grid();
    let form = standard_form(&g, 2).unwrap();
    let s = [[1.0, -2.0], [-2.0, 0.5]];
    let gens: Vec<GenVector> = (0..2)
        .map(|j| {
            GenVector::from_f64(&g, &[f64::from(u8::from(j == 0)), f64::from(u8::from(j == 1)), s[0][j], s[1][j]])
                .unwrap()
        })
        .collect();
    let u = Submodule::new(&g, 4, gens.clone(), &cfg()).unwrap();
    let b = lagrangian_standard_form(&form, &u, &cfg()).unwrap();
    b.verify(&form, &cfg()).unwrap();
    for (e, v) in b.e.iter().zip(&gens) {
        assert!(e.same_samples(v));
    }
}

#[test]
fn scaling_matrix_is_symplectic() {
    let g = grid();
    let a = GenMatrix::from_f64(&g, 2, 2, &[2.0, 0.0, 0.0, 0.5]).unwrap();
    let r = is_symplectic_matrix(&a, &cfg()).unwrap();
    assert!(r.is_symplectic && r.det_sq_minus_one.classification.is_negligible());
    assert!(is_symplectic_matrix(&standard_j(&g, 3), &cfg()).unwrap().is_symplectic);
    assert!(
        !is_symplectic_matrix(&GenMatrix::from_f64(&g, 2, 2, &[2.0, 0.0, 0.0, 2.0]).unwrap(), &cfg())
            .unwrap()
            .is_symplectic
    );
    assert!(matches!(is_symplectic_matrix(&GenMatrix::identity(&g, 3), &cfg()), Err(GnaError::Shape(_))));
}
