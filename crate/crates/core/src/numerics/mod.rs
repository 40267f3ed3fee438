//! Scalar conventions, tolerance policy, geometric sequences and Laurent
//! polynomial arithmetic.

mod laurent;
mod scalar;
mod tolerance;

pub use laurent::{laurent_scale_arg, LaurentPoly};
pub use scalar::{ratio, ulp, Scalar};
pub use tolerance::{ScaleMode, TolerancePolicy};

pub(crate) use scalar::{check_q, vanishes};

use crate::{Error, Result};

/// `base · ratio^n` for `n = 0..count`.
pub fn geometric_seq<T: Scalar>(base: &T, ratio: &T, count: usize) -> Result<Vec<T>> {
    if ratio.is_zero() {
        return Err(Error::InvalidParameter("geometric ratio must be nonzero".into()));
    }
    let mut out = Vec::with_capacity(count);
    let mut cur = base.clone();
    for _ in 0..count {
        out.push(cur.clone());
        cur = cur * ratio.clone();
    }
    Ok(out)
}

/// Ratio of products of factors `(1 − α·x^k)`, the shape every recurrence
/// coefficient in this crate takes.
///
/// [`FactorRatio::one_minus`] evaluates `1 − value` with the unit constant
/// terms cancelled symbolically, so the result keeps full relative accuracy
/// when `x → 0` drives the ratio to 1.
#[derive(Clone, Debug)]
pub struct FactorRatio<T> {
    num: Vec<(T, u32)>,
    den: Vec<(T, u32)>,
}

impl<T: Scalar> FactorRatio<T> {
    pub fn new(num: Vec<(T, u32)>, den: Vec<(T, u32)>) -> Self {
        Self { num, den }
    }

    fn eval_product(factors: &[(T, u32)], x: &T) -> T {
        factors.iter().fold(T::one(), |acc, (a, k)| {
            acc * (T::one() - a.clone() * x.powi(*k as i32))
        })
    }

    fn expand(factors: &[(T, u32)]) -> Vec<T> {
        let mut poly = vec![T::one()];
        for (a, k) in factors {
            let k = *k as usize;
            let mut next = vec![T::zero(); poly.len() + k];
            for (i, c) in poly.iter().enumerate() {
                next[i] = next[i].clone() + c.clone();
                next[i + k] = next[i + k].clone() - c.clone() * a.clone();
            }
            poly = next;
        }
        poly
    }

    pub fn numerator(&self, x: &T) -> T {
        Self::eval_product(&self.num, x)
    }

    pub fn denominator(&self, x: &T) -> T {
        Self::eval_product(&self.den, x)
    }

    pub fn value(&self, x: &T) -> T {
        self.numerator(x) / self.denominator(x)
    }

    /// `1 − value(x)` without cancelling the leading 1.
    pub fn one_minus(&self, x: &T) -> T {
        let n = Self::expand(&self.num);
        let d = Self::expand(&self.den);
        let len = n.len().max(d.len());
        // Horner over the degree ≥ 1 part of (den − num); both constants are 1.
        let mut acc = T::zero();
        for k in (1..len).rev() {
            let dk = d.get(k).cloned().unwrap_or_else(T::zero);
            let nk = n.get(k).cloned().unwrap_or_else(T::zero);
            acc = acc * x.clone() + (dk - nk);
        }
        acc * x.clone() / self.denominator(x)
    }
}
