//! Banded-matrix kernel: storage, products, q-commutator residuals, diagonal
//! similarity, characteristic polynomials and eigenvalues.

mod band;
mod residual;
mod spectrum;

pub use band::{band_mul, diag_similarity, overflow_guard, BandMatrix};
pub use residual::{q_commutator, q_commutator_defect, q_commutator_residual, ResidualReport, Truncated};
pub use spectrum::{char_poly_eval, eigenvalues};
