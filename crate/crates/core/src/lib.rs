pub mod classify;
pub mod dense;
pub mod error;
pub mod expr;
pub mod grid;
pub mod idempotent;
pub mod linalg;
pub mod num;
pub mod scalar;
pub mod spectra;
pub mod symplectic;
