//! Matrices and vectors over generalized numbers, and the linear algebra
//! that is well defined for them.

mod matrix;
mod ops;

pub(crate) use matrix::map_cached;
pub use matrix::{GenMatrix, GenVector, MatSamples};
pub use ops::{
    det, extend_to_basis, free_report, free_set_report, gram, in_span, inner, inverse, is_free, is_free_set,
    is_invertible, kernel_free_vector, norm_sq, realify_kernel_vector, solve, solve_matrix,
};
