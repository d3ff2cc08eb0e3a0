use serde::Serialize;

use crate::classify::{classify, AsymptoticReport, ClassifierConfig};
use crate::error::{GnaError, Result};
use crate::grid::{same_grid, Grid};
use crate::linalg::{det, is_invertible, GenMatrix, GenVector};
use crate::scalar::{GenScalar, ScalarKind};

/// Non-degenerate skew-symmetric bilinear form on `R̃^{2n}`, stored as its
/// Gramian in the working basis.
#[derive(Clone, Debug)]
pub struct SymplecticForm {
    gram: GenMatrix,
}

/// `J = [[0, −I_n], [I_n, 0]]`.
pub fn standard_j(grid: &Grid, n: usize) -> GenMatrix {
    let one = GenScalar::one(grid);
    let m_one = one.neg();
    let zero = GenScalar::zero(grid);
    GenMatrix::from_fn(grid, 2 * n, 2 * n, |i, j| {
        if i < n && j == i + n {
            m_one.clone()
        } else if i >= n && j + n == i {
            one.clone()
        } else {
            zero.clone()
        }
    })
    .expect("entries share the grid")
}

/// The standard form on `T*(R̃^n)`.
pub fn standard_form(grid: &Grid, n: usize) -> Result<SymplecticForm> {
    if n == 0 {
        return Err(GnaError::Shape("standard form needs n >= 1".into()));
    }
    Ok(SymplecticForm { gram: standard_j(grid, n) })
}

/// `(G − Gᵗ)/2`.
pub(crate) fn skew_part(g: &GenMatrix) -> GenMatrix {
    g.sub(&g.transpose()).expect("same shape").scale_f64(0.5)
}

impl SymplecticForm {
    /// Validates the Gramian and keeps its exactly skew representative.
    pub fn new(gram: GenMatrix, cfg: &ClassifierConfig) -> Result<Self> {
        if gram.kind() != ScalarKind::Real {
            return Err(GnaError::InvalidForm("Gramian must be real".into()));
        }
        if !gram.is_square() {
            return Err(GnaError::InvalidForm(format!("Gramian is {}x{}", gram.rows(), gram.cols())));
        }
        if gram.rows() == 0 || !gram.rows().is_multiple_of(2) {
            return Err(GnaError::InvalidForm(format!("rank {} is not a positive even number", gram.rows())));
        }
        let sym = gram.add(&gram.transpose())?.negligibility(cfg);
        if !sym.classification.is_negligible() {
            return Err(GnaError::InvalidForm(format!("G + Gᵗ is {}, not negligible", sym.classification)));
        }
        let gram = skew_part(&gram);
        let (ok, r) = is_invertible(&gram, cfg)?;
        if !ok {
            return Err(GnaError::InvalidForm(format!("degenerate: det(G) is {}", r.classification)));
        }
        Ok(SymplecticForm { gram })
    }

    pub fn gram(&self) -> &GenMatrix {
        &self.gram
    }

    pub fn grid(&self) -> &Grid {
        self.gram.grid()
    }

    /// Rank `2n` of the underlying module.
    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn half_rank(&self) -> usize {
        self.gram.rows() / 2
    }

    /// `σ(v, w) = vᵗ G w`.
    pub fn apply(&self, v: &GenVector, w: &GenVector) -> Result<GenScalar> {
        if v.len() != self.rank() || w.len() != self.rank() {
            return Err(GnaError::Shape(format!(
                "vectors of length {} and {} for a form of rank {}",
                v.len(),
                w.len(),
                self.rank()
            )));
        }
        let gw = self.gram.matvec(w)?;
        Ok(v.as_matrix().transpose().matmul(gw.as_matrix())?.entry(0, 0))
    }

    /// `Xᵗ G Y` for the columns of `X` and `Y`.
    pub fn restrict(&self, x: &GenMatrix, y: &GenMatrix) -> Result<GenMatrix> {
        x.transpose().matmul(&self.gram)?.matmul(y)
    }

    pub(crate) fn check_vectors(&self, vs: &[GenVector]) -> Result<()> {
        for v in vs {
            if !same_grid(v.grid(), self.grid()) {
                return Err(GnaError::GridMismatch);
            }
            if v.len() != self.rank() {
                return Err(GnaError::Shape(format!(
                    "vector of length {} for a form of rank {}",
                    v.len(),
                    self.rank()
                )));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SymplecticMatrixReport {
    pub is_symplectic: bool,
    /// Classification of `AᵗJA − J`.
    pub relation: AsymptoticReport,
    /// Classification of `det(A)² − 1`.
    pub det_sq_minus_one: AsymptoticReport,
}

/// Checks `AᵗJA = J` up to negligibility.
pub fn is_symplectic_matrix(a: &GenMatrix, cfg: &ClassifierConfig) -> Result<SymplecticMatrixReport> {
    if !a.is_square() || !a.rows().is_multiple_of(2) || a.rows() == 0 {
        return Err(GnaError::Shape(format!(
            "symplectic matrices are square of even size, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let j = standard_j(a.grid(), a.rows() / 2);
    let relation = a.transpose().matmul(&j)?.matmul(a)?.sub(&j)?.negligibility(cfg);
    let d = det(a)?;
    let det_sq_minus_one = classify(&d.mul(&d)?.sub(&GenScalar::one(a.grid()))?, cfg);
    Ok(SymplecticMatrixReport { is_symplectic: relation.classification.is_negligible(), relation, det_sq_minus_one })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{make_grid, GridKind};

    fn grid() -> Grid {
        make_grid(GridKind::Dyadic, 4, 40).unwrap()
    }

    #[test]
    fn standard_form_reproduces_canonical_pairing() {
        let g = grid();
        let s = standard_form(&g, 2).unwrap();
        let v = GenVector::from_f64(&g, &[1.0, 2.0, 3.0, 4.0]).unwrap();
        let w = GenVector::from_f64(&g, &[5.0, 6.0, 7.0, 8.0]).unwrap();
        // ⟨y, ξ⟩ − ⟨x, η⟩ with v = (x, ξ), w = (y, η)
        let want = (5.0 * 3.0 + 6.0 * 4.0) - (1.0 * 7.0 + 2.0 * 8.0);
        assert_eq!(s.apply(&v, &w).unwrap().to_f64()[0], want);
        let f1 = GenVector::basis(&g, 4, 2);
        let e1 = GenVector::basis(&g, 4, 0);
        assert_eq!(s.apply(&f1, &e1).unwrap().to_f64()[0], 1.0);
    }

    #[test]
    fn constructor_rejects_bad_gramians() {
        let g = grid();
        let cfg = ClassifierConfig::default();
        let sym = GenMatrix::from_f64(&g, 2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        assert!(matches!(SymplecticForm::new(sym, &cfg), Err(GnaError::InvalidForm(_))));
        let zero = GenMatrix::zeros(&g, 2, 2);
        assert!(matches!(SymplecticForm::new(zero, &cfg), Err(GnaError::InvalidForm(_))));
        let odd = GenMatrix::zeros(&g, 3, 3);
        assert!(matches!(SymplecticForm::new(odd, &cfg), Err(GnaError::InvalidForm(_))));
    }

    #[test]
    fn symplectic_matrices() {
        let g = grid();
        let cfg = ClassifierConfig::default();
        let j = standard_j(&g, 1);
        assert!(is_symplectic_matrix(&j, &cfg).unwrap().is_symplectic);
        assert!(is_symplectic_matrix(&GenMatrix::identity(&g, 4), &cfg).unwrap().is_symplectic);
        let d = GenMatrix::from_f64(&g, 2, 2, &[2.0, 0.0, 0.0, 0.5]).unwrap();
        let r = is_symplectic_matrix(&d, &cfg).unwrap();
        assert!(r.is_symplectic && r.det_sq_minus_one.classification.is_negligible());
        let bad = GenMatrix::from_f64(&g, 2, 2, &[2.0, 0.0, 0.0, 1.0]).unwrap();
        assert!(!is_symplectic_matrix(&bad, &cfg).unwrap().is_symplectic);
        assert!(matches!(is_symplectic_matrix(&GenMatrix::identity(&g, 3), &cfg), Err(GnaError::Shape(_))));
    }
}
