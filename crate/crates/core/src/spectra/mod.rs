//! Eigenvalues of generalized matrices: the determinant criterion,
//! eigenvectors from roots, distinguished tuples of Hermitian and
//! skew-symmetric matrices, and the skew normal form.

mod eigen;
mod normal_form;
mod tuple;

pub use eigen::{eigenpair_from_root, is_eigenvalue, sampled_eigenvalues};
pub use normal_form::{skew_normal_form, skew_to_standard_j, SkewNormalForm};
pub use tuple::{
    char_poly_roots_distinguished, hermitian_eigentuple, hermitize, representative_stability_check, skew_eigentuple,
    skew_symmetrize, EigenKind, EigenTuple, StabilityReport, TupleKind,
};
