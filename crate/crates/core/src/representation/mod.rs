//! General tridiagonal representations of `AB − qBA = I`: construction,
//! consistency residuals, classification, the canonical pair and chain
//! decomposition of reducible finite representations.

mod canonical;
mod decompose;
mod general;
mod structured;

pub use canonical::canonical_pair;
pub use decompose::{chain_partition, decompose, Block, Decomposition};
pub use general::{
    build_general, classify, initial_from_s, s_from_initial, xi_residuals, Classification,
    GeneralParams, GeneralSolutionTrace, XiResiduals, XiSequence,
};
pub(crate) use general::row_relative_deviation;
pub use structured::{b_side_identification, general_from_structured, StructuredParams};
