//! Symplectic forms on free modules `R̃^{2n}`.

mod basis;
mod form;
mod submodule;

pub use basis::{
    extend_symplectic_basis, symplectic_basis, symplectomorphism_to_standard, PartialBasis, SymplecticBasis,
};
pub use form::{is_symplectic_matrix, standard_form, standard_j, SymplecticForm, SymplecticMatrixReport};
pub use submodule::{
    annihilator, classify_submodule, lagrangian_standard_form, Submodule, SubmoduleKind, SubmoduleReport,
};
