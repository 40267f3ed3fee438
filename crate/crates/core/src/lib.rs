//! Tridiagonal representations of the q-oscillator algebra `AB − qBA = I`
//! and the orthogonal-polynomial operators they carry: big q-Jacobi,
//! Askey–Wilson, q-Hahn and q-para Krawtchouk.
//!
//! All constructions are generic over [`Scalar`]: `f64` is the production
//! path and `BigRational` reproduces every identity exactly.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod families;
pub mod numerics;
pub mod opmatrix;
pub mod representation;
pub mod tridiagonalization;

pub use error::{Error, Result};
pub use numerics::{Scalar, TolerancePolicy};

/// Exact rational scalar.
pub type Rational = num_rational::BigRational;

pub type BandMatrixF64 = opmatrix::BandMatrix<f64>;
pub type BandMatrixQ = opmatrix::BandMatrix<Rational>;
pub type GeneralParamsF64 = representation::GeneralParams<f64>;
pub type GeneralParamsQ = representation::GeneralParams<Rational>;
pub type StructuredParamsF64 = representation::StructuredParams<f64>;
pub type StructuredParamsQ = representation::StructuredParams<Rational>;
pub type AWParamsF64 = families::AWParams<f64>;
pub type AWParamsQ = families::AWParams<Rational>;
pub type MonicRecurrenceF64 = families::MonicRecurrence<f64>;
pub type LaurentPolyF64 = numerics::LaurentPoly<f64>;
