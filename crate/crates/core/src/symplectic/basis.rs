use crate::classify::{classify, ClassifierConfig};
use crate::error::{GnaError, Result};
use crate::linalg::{extend_to_basis, free_set_report, solve, GenMatrix, GenVector};
use crate::scalar::GenScalar;

use super::form::{skew_part, standard_j, SymplecticForm};
use super::submodule::annihilator_of;

/// `σ(e_j, e_l) = σ(f_j, f_l) = 0`, `σ(f_j, e_l) = δ_jl`.
#[derive(Clone, Debug)]
pub struct SymplecticBasis {
    pub e: Vec<GenVector>,
    pub f: Vec<GenVector>,
}

impl SymplecticBasis {
    /// The columns `[e_1 … e_n f_1 … f_n]`.
    pub fn matrix(&self) -> Result<GenMatrix> {
        let first = self.e.first().ok_or_else(|| GnaError::Shape("empty basis".into()))?;
        let cols: Vec<GenVector> = self.e.iter().chain(&self.f).cloned().collect();
        GenMatrix::from_columns(first.grid(), first.len(), &cols)
    }

    /// Verifies every relation; fails with the first offending pair.
    pub fn verify(&self, form: &SymplecticForm, cfg: &ClassifierConfig) -> Result<()> {
        let m = self.matrix()?;
        let n = self.e.len();
        let rel = form.restrict(&m, &m)?.sub(&standard_j(form.grid(), n))?;
        if rel.is_negligible(cfg) {
            return Ok(());
        }
        for i in 0..2 * n {
            for j in 0..2 * n {
                let r = classify(&rel.entry(i, j), cfg);
                if !r.classification.is_negligible() {
                    return Err(GnaError::PostconditionFailed(format!(
                        "relation σ({}, {}) is off by {}",
                        label(i, n),
                        label(j, n),
                        r.classification
                    )));
                }
            }
        }
        unreachable!("some entry of a non-negligible matrix is non-negligible")
    }
}

fn label(i: usize, n: usize) -> String {
    if i < n {
        format!("e_{}", i + 1)
    } else {
        format!("f_{}", i - n + 1)
    }
}

/// Symplectic basis of `(R̃^{2n}, σ)`.
///
/// Peels off one pair at a time: with `G_W` the Gramian on the current
/// complement, `f = δ_1`, `e = G_W⁻¹ δ_1`; the rest of a basis extending
/// `{e, f}` is projected by `w ↦ w − σ(w,e) f + σ(w,f) e` and the loop
/// continues on the restricted Gramian.
pub fn symplectic_basis(form: &SymplecticForm, cfg: &ClassifierConfig) -> Result<SymplecticBasis> {
    let grid = form.grid().clone();
    let (e, f) = basis_on(&GenMatrix::identity(&grid, form.rank()), form.gram(), cfg)?;
    let basis = SymplecticBasis { e, f };
    basis.verify(form, cfg)?;
    Ok(basis)
}

/// Runs the pair-peeling loop on the span of the columns of `b`, whose
/// Gramian is `gw`. Returned vectors are in ambient coordinates.
fn basis_on(b: &GenMatrix, gw: &GenMatrix, cfg: &ClassifierConfig) -> Result<(Vec<GenVector>, Vec<GenVector>)> {
    let grid = b.grid().clone();
    let mut b = b.clone();
    let mut gw = gw.clone();
    let mut es = Vec::new();
    let mut fs = Vec::new();
    while gw.rows() > 0 {
        let m = gw.rows();
        if !m.is_multiple_of(2) {
            return Err(GnaError::InvalidForm(format!("odd rank {m}")));
        }
        let f1 = GenVector::basis(&grid, m, 0);
        let e1 = solve(&gw, &f1, cfg).map_err(|err| match err {
            GnaError::SingularMatrix { report } => {
                GnaError::InvalidForm(format!("degenerate restriction: det is {}", report.classification))
            }
            other => other,
        })?;
        es.push(b.matvec(&e1)?);
        fs.push(b.matvec(&f1)?);
        if m == 2 {
            break;
        }
        let rest = extend_to_basis(&[e1.clone(), f1.clone()], m, cfg)?;
        let sigma = |v: &GenVector, w: &GenVector| -> Result<GenScalar> {
            Ok(v.as_matrix().transpose().matmul(&gw)?.matmul(w.as_matrix())?.entry(0, 0))
        };
        let mut proj = Vec::with_capacity(rest.len());
        for w in &rest {
            let p = w.sub(&f1.scale(&sigma(w, &e1)?)?)?.add(&e1.scale(&sigma(w, &f1)?)?)?;
            proj.push(p);
        }
        let c = GenMatrix::from_columns(&grid, m, &proj)?;
        gw = skew_part(&c.transpose().matmul(&gw)?.matmul(&c)?);
        b = b.matmul(&c)?;
    }
    Ok((es, fs))
}

/// `M = [e_1 … e_n f_1 … f_n]` with `Mᵗ G M = J`.
pub fn symplectomorphism_to_standard(form: &SymplecticForm, cfg: &ClassifierConfig) -> Result<GenMatrix> {
    symplectic_basis(form, cfg)?.matrix()
}

/// A partial symplectic basis: `e_i` for `i ∈ I`, `f_j` for `j ∈ J`, with
/// zero-based indices below `n`.
#[derive(Clone, Debug, Default)]
pub struct PartialBasis {
    pub e: Vec<(usize, GenVector)>,
    pub f: Vec<(usize, GenVector)>,
}

fn check_partial(form: &SymplecticForm, p: &PartialBasis, cfg: &ClassifierConfig) -> Result<()> {
    let n = form.half_rank();
    let mut seen_e = vec![false; n];
    let mut seen_f = vec![false; n];
    for (idx, seen, name) in [(&p.e, &mut seen_e, "e"), (&p.f, &mut seen_f, "f")] {
        for (i, v) in idx.iter() {
            if *i >= n {
                return Err(GnaError::Shape(format!("index {name}_{} beyond n = {n}", i + 1)));
            }
            if seen[*i] {
                return Err(GnaError::Shape(format!("{name}_{} given twice", i + 1)));
            }
            seen[*i] = true;
            form.check_vectors(std::slice::from_ref(v))?;
        }
    }
    let all: Vec<GenVector> = p.e.iter().chain(&p.f).map(|(_, v)| v.clone()).collect();
    if let Some(r) = free_set_report(&all, cfg)? {
        if !r.classification.is_strictly_nonzero() {
            return Err(GnaError::NotFree { report: Box::new(r) });
        }
    }
    let grid = form.grid();
    let check = |a: &GenVector, b: &GenVector, want: f64, pair: String| -> Result<()> {
        let d = form.apply(a, b)?.sub(&GenScalar::constant(grid, want))?;
        let r = classify(&d, cfg);
        if !r.classification.is_negligible() {
            return Err(GnaError::Precondition(format!("relation for {pair} violated: {}", r.classification)));
        }
        Ok(())
    };
    for (i, a) in &p.e {
        for (j, b) in &p.e {
            if i < j {
                check(a, b, 0.0, format!("(e_{}, e_{})", i + 1, j + 1))?;
            }
        }
    }
    for (i, a) in &p.f {
        for (j, b) in &p.f {
            if i < j {
                check(a, b, 0.0, format!("(f_{}, f_{})", i + 1, j + 1))?;
            }
        }
    }
    for (j, a) in &p.f {
        for (i, b) in &p.e {
            check(a, b, if i == j { 1.0 } else { 0.0 }, format!("(f_{}, e_{})", j + 1, i + 1))?;
        }
    }
    Ok(())
}

/// Completes a partial symplectic basis.
///
/// An index with only `f_j` gets `e_j` by solving `σ(e, x) = r_x` against a
/// basis extending the current vectors, with `r = −1` at `f_j` and zero
/// elsewhere; an index with only `e_i` is handled symmetrically. Once every
/// given index is paired, the rest comes from a symplectic basis of the
/// annihilator of the pairs.
pub fn extend_symplectic_basis(
    form: &SymplecticForm,
    partial: &PartialBasis,
    cfg: &ClassifierConfig,
) -> Result<SymplecticBasis> {
    check_partial(form, partial, cfg)?;
    let n = form.half_rank();
    let grid = form.grid().clone();
    let mut e: Vec<Option<GenVector>> = vec![None; n];
    let mut f: Vec<Option<GenVector>> = vec![None; n];
    for (i, v) in &partial.e {
        e[*i] = Some(v.clone());
    }
    for (j, v) in &partial.f {
        f[*j] = Some(v.clone());
    }

    loop {
        let lone_f = (0..n).find(|&j| f[j].is_some() && e[j].is_none());
        let lone_e = (0..n).find(|&i| e[i].is_some() && f[i].is_none());
        let (slot, want_e) = match (lone_f, lone_e) {
            (Some(j), _) => (j, true),
            (None, Some(i)) => (i, false),
            (None, None) => break,
        };
        // Known vectors in a fixed order, with the target right-hand side.
        let mut known = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..n {
            if let Some(v) = &e[i] {
                known.push(v.clone());
                rhs.push(if !want_e && i == slot { 1.0 } else { 0.0 });
            }
        }
        for j in 0..n {
            if let Some(v) = &f[j] {
                known.push(v.clone());
                rhs.push(if want_e && j == slot { -1.0 } else { 0.0 });
            }
        }
        let extra = extend_to_basis(&known, 2 * n, cfg)?;
        rhs.resize(2 * n, 0.0);
        let x: Vec<GenVector> = known.into_iter().chain(extra).collect();
        let xm = GenMatrix::from_columns(&grid, 2 * n, &x)?;
        // σ(v, x_k) = x_kᵗ Gᵗ v
        let sys = xm.transpose().matmul(&form.gram().transpose())?;
        let v = solve(&sys, &GenVector::from_f64(&grid, &rhs)?, cfg)?;
        if want_e {
            e[slot] = Some(v);
        } else {
            f[slot] = Some(v);
        }
    }

    let paired: Vec<usize> = (0..n).filter(|&i| e[i].is_some()).collect();
    let free_slots: Vec<usize> = (0..n).filter(|&i| e[i].is_none()).collect();
    if !free_slots.is_empty() {
        let u: Vec<GenVector> = paired.iter().flat_map(|&i| [e[i].clone().unwrap(), f[i].clone().unwrap()]).collect();
        let comp = if u.is_empty() {
            GenMatrix::identity(&grid, 2 * n)
        } else {
            let gens = annihilator_of(form, &u, cfg)?;
            GenMatrix::from_columns(&grid, 2 * n, &gens)?
        };
        let gw = skew_part(&form.restrict(&comp, &comp)?);
        let (ne, nf) = basis_on(&comp, &gw, cfg)?;
        for ((slot, a), b) in free_slots.iter().zip(ne).zip(nf) {
            e[*slot] = Some(a);
            f[*slot] = Some(b);
        }
    }
    let basis = SymplecticBasis {
        e: e.into_iter().map(|v| v.expect("filled")).collect(),
        f: f.into_iter().map(|v| v.expect("filled")).collect(),
    };
    basis.verify(form, cfg)?;
    Ok(basis)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, Grid, GridKind};
    use crate::symplectic::form::standard_form;

    fn grid() -> Grid {
        make_grid(GridKind::Dyadic, 4, 40).unwrap()
    }

    fn cfg() -> ClassifierConfig {
        ClassifierConfig::default()
    }

    #[test]
    fn two_by_two_form_with_scale() {
        let g = grid();
        let form = SymplecticForm::new(GenMatrix::from_f64(&g, 2, 2, &[0.0, -2.0, 2.0, 0.0]).unwrap(), &cfg()).unwrap();
        let b = symplectic_basis(&form, &cfg()).unwrap();
        assert_eq!(b.f[0].to_f64()[0], vec![1.0, 0.0]);
        assert_eq!(b.e[0].to_f64()[0], vec![0.0, -0.5]);
    }

    #[test]
    fn standard_form_basis_is_valid() {
        let g = grid();
        let form = standard_form(&g, 3).unwrap();
        let b = symplectic_basis(&form, &cfg()).unwrap();
        assert_eq!(b.e.len(), 3);
        let m = symplectomorphism_to_standard(&form, &cfg()).unwrap();
        assert!(form.restrict(&m, &m).unwrap().approx_eq(&standard_j(&g, 3), &cfg()).unwrap());
    }

    #[test]
    fn eps_scaled_form() {
        let g = grid();
        let a = GenScalar::eps(&g);
        let z = GenScalar::zero(&g);
        let gram = GenMatrix::from_rows(&g, &[vec![z.clone(), a.neg()], vec![a, z]]).unwrap();
        let form = SymplecticForm::new(gram, &cfg()).unwrap();
        symplectic_basis(&form, &cfg()).unwrap();
    }

    #[test]
    fn empty_partial_is_plain_basis() {
        let g = grid();
        let form = standard_form(&g, 2).unwrap();
        let b = extend_symplectic_basis(&form, &PartialBasis::default(), &cfg()).unwrap();
        assert_eq!(b.e.len(), 2);
    }

    #[test]
    fn one_pair_completes() {
        let g = grid();
        let form = standard_form(&g, 2).unwrap();
        let p = PartialBasis { e: vec![(0, GenVector::basis(&g, 4, 0))], f: vec![(0, GenVector::basis(&g, 4, 2))] };
        let b = extend_symplectic_basis(&form, &p, &cfg()).unwrap();
        assert!(b.e[0].same_samples(&GenVector::basis(&g, 4, 0)));
    }

    #[test]
    fn lone_vectors_get_partners() {
        let g = grid();
        let form = standard_form(&g, 2).unwrap();
        let p = PartialBasis { e: vec![(1, GenVector::basis(&g, 4, 1))], f: vec![(0, GenVector::basis(&g, 4, 2))] };
        extend_symplectic_basis(&form, &p, &cfg()).unwrap();
    }

    #[test]
    fn violated_relation_is_reported() {
        let g = grid();
        let form = standard_form(&g, 2).unwrap();
        let p = PartialBasis { e: vec![(0, GenVector::basis(&g, 4, 0))], f: vec![(0, GenVector::basis(&g, 4, 3))] };
        match extend_symplectic_basis(&form, &p, &cfg()) {
            Err(GnaError::Precondition(msg)) => assert!(msg.contains("(f_1, e_1)")),
            other => panic!("unexpected {other:?}"),
        }
    }
}
