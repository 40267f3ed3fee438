use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// How the comparison scale of a matrix identity is chosen.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScaleMode {
    /// Scale fixed at 1.
    Unit,
    /// `max(1, ‖X‖∞·‖Y‖∞)` of the two operands of a product identity.
    OperatorNormProduct,
}

/// Absolute/relative tolerance pair.
///
/// The effective tolerance at scale `s` is `max(abs_tol, rel_tol * max(s, 1))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TolerancePolicy {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub scale_mode: ScaleMode,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 1e-9,
            scale_mode: ScaleMode::OperatorNormProduct,
        }
    }
}

impl TolerancePolicy {
    pub fn new(abs_tol: f64, rel_tol: f64, scale_mode: ScaleMode) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "tolerances must be positive (abs_tol = {abs_tol}, rel_tol = {rel_tol})"
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            scale_mode,
        })
    }

    pub fn with_rel(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn effective(&self, scale: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * scale.max(1.0))
    }

    /// Scale for an identity whose left side is built from operands with the
    /// given infinity norms.
    pub fn scale_for(&self, norm_x: f64, norm_y: f64) -> f64 {
        match self.scale_mode {
            ScaleMode::Unit => 1.0,
            ScaleMode::OperatorNormProduct => (norm_x * norm_y).max(1.0),
        }
    }
}
