use serde::Serialize;

use crate::classify::ClassifierConfig;
use crate::error::{GnaError, Result};
use crate::grid::{same_grid, Grid};
use crate::linalg::{extend_to_basis, free_set_report, in_span, is_invertible, solve_matrix, GenMatrix, GenVector};

use super::basis::{extend_symplectic_basis, PartialBasis, SymplecticBasis};
use super::form::SymplecticForm;

/// Free submodule given by a free set of generators.
#[derive(Clone, Debug)]
pub struct Submodule {
    grid: Grid,
    dim: usize,
    generators: Vec<GenVector>,
}

impl Submodule {
    /// Rejects generator sets whose Gram determinant is not strictly nonzero.
    pub fn new(grid: &Grid, dim: usize, generators: Vec<GenVector>, cfg: &ClassifierConfig) -> Result<Self> {
        for v in &generators {
            if !same_grid(grid, v.grid()) {
                return Err(GnaError::GridMismatch);
            }
            if v.len() != dim {
                return Err(GnaError::Shape(format!("generator of length {} in rank {dim}", v.len())));
            }
        }
        if let Some(r) = free_set_report(&generators, cfg)? {
            if !r.classification.is_strictly_nonzero() {
                return Err(GnaError::NotFree { report: Box::new(r) });
            }
        }
        Ok(Submodule { grid: grid.clone(), dim, generators })
    }

    pub fn generators(&self) -> &[GenVector] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn ambient_rank(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Least-squares membership with negligible residual.
    pub fn contains(&self, v: &GenVector, cfg: &ClassifierConfig) -> Result<bool> {
        in_span(v, &self.generators, cfg)
    }
}

/// Generators of `{v : σ(v, u) = 0 for all u}` where `us` is a free set.
///
/// With `X = [u_1 … u_k b_{k+1} … b_{2n}]` a basis and `G_X = Xᵗ G X`, the
/// vector `X x` annihilates every `u_i` exactly when `(G_Xᵗ x)_i = 0` for
/// `i ≤ k`, so the generators are `X G_Xᵗ⁻¹ δ_l` for `l > k`.
pub(crate) fn annihilator_of(
    form: &SymplecticForm,
    us: &[GenVector],
    cfg: &ClassifierConfig,
) -> Result<Vec<GenVector>> {
    form.check_vectors(us)?;
    let dim = form.rank();
    let grid = form.grid();
    if us.is_empty() {
        return Ok((0..dim).map(|j| GenVector::basis(grid, dim, j)).collect());
    }
    let k = us.len();
    if k == dim {
        return Ok(Vec::new());
    }
    let extra = extend_to_basis(us, dim, cfg).map_err(|e| match e {
        GnaError::NotFree { .. } | GnaError::PostconditionFailed(_) => {
            GnaError::Precondition(format!("generators cannot be extended to a basis: {e}"))
        }
        other => other,
    })?;
    let x: Vec<GenVector> = us.iter().cloned().chain(extra).collect();
    let xm = GenMatrix::from_columns(grid, dim, &x)?;
    let gx = form.restrict(&xm, &xm)?;
    let rhs =
        GenMatrix::from_columns(grid, dim, &(k..dim).map(|l| GenVector::basis(grid, dim, l)).collect::<Vec<_>>())?;
    let coords = solve_matrix(&gx.transpose(), &rhs, cfg)?;
    let gens = xm.matmul(&coords)?.columns();

    let check = GenMatrix::from_columns(grid, dim, us)?;
    let cross = form.restrict(&GenMatrix::from_columns(grid, dim, &gens)?, &check)?;
    let r = cross.negligibility(cfg);
    if !r.classification.is_negligible() {
        return Err(GnaError::PostconditionFailed(format!(
            "annihilator generators pair to {} with the submodule",
            r.classification
        )));
    }
    Ok(gens)
}

pub fn annihilator(form: &SymplecticForm, u: &Submodule, cfg: &ClassifierConfig) -> Result<Submodule> {
    let gens = annihilator_of(form, u.generators(), cfg)?;
    Submodule::new(form.grid(), form.rank(), gens, cfg)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubmoduleKind {
    Lagrangian,
    Symplectic,
    Isotropic,
    Involutive,
    None,
}

#[derive(Clone, Debug, Serialize)]
pub struct SubmoduleReport {
    /// The first of lagrangian, symplectic, isotropic, involutive that holds.
    pub kind: SubmoduleKind,
    pub isotropic: bool,
    pub symplectic: bool,
    pub involutive: bool,
    pub lagrangian: bool,
    pub rank: usize,
    pub annihilator_rank: usize,
}

/// Isotropic: the restricted Gramian is negligible. Symplectic: it is
/// invertible. Lagrangian: isotropic of half rank. Involutive: every
/// annihilator generator lies in the submodule.
pub fn classify_submodule(form: &SymplecticForm, u: &Submodule, cfg: &ClassifierConfig) -> Result<SubmoduleReport> {
    form.check_vectors(u.generators())?;
    let ann = annihilator_of(form, u.generators(), cfg)?;
    let (isotropic, symplectic) = if u.rank() == 0 {
        (true, true)
    } else {
        let m = GenMatrix::from_columns(form.grid(), form.rank(), u.generators())?;
        let r = form.restrict(&m, &m)?;
        (r.is_negligible(cfg), is_invertible(&r, cfg)?.0)
    };
    let mut involutive = true;
    for a in &ann {
        if !u.contains(a, cfg)? {
            involutive = false;
            break;
        }
    }
    let lagrangian = isotropic && u.rank() == form.half_rank();
    let kind = if lagrangian {
        SubmoduleKind::Lagrangian
    } else if symplectic {
        SubmoduleKind::Symplectic
    } else if isotropic {
        SubmoduleKind::Isotropic
    } else if involutive {
        SubmoduleKind::Involutive
    } else {
        SubmoduleKind::None
    };
    Ok(SubmoduleReport {
        kind,
        isotropic,
        symplectic,
        involutive,
        lagrangian,
        rank: u.rank(),
        annihilator_rank: ann.len(),
    })
}

/// Symplectic basis whose `e`'s are the generators of a Lagrangian `U`;
/// the `f`'s then play the role of the dual basis of `U*`.
pub fn lagrangian_standard_form(
    form: &SymplecticForm,
    u: &Submodule,
    cfg: &ClassifierConfig,
) -> Result<SymplecticBasis> {
    let report = classify_submodule(form, u, cfg)?;
    if !report.lagrangian {
        return Err(GnaError::Precondition(format!("submodule is {:?}, not Lagrangian", report.kind)));
    }
    let partial = PartialBasis { e: u.generators().iter().cloned().enumerate().collect(), f: Vec::new() };
    extend_symplectic_basis(form, &partial, cfg)
}
