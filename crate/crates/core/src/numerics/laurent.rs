//! Finite Laurent polynomials `Σ c_k x^k`, `k ∈ ℤ`.
//!
//! Arithmetic drops exact zeros only. Thresholded pruning is explicit
//! ([`LaurentPoly::pruned`]) so that cancellation residues stay observable.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};


use super::Scalar;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentPoly<T> {
    coeffs: BTreeMap<i32, T>,
}

impl<T: Scalar> Default for LaurentPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Scalar> LaurentPoly<T> {
    pub fn zero() -> Self {
        Self {
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: T) -> Self {
        Self::monomial(c, 0)
    }

    pub fn monomial(c: T, degree: i32) -> Self {
        let mut p = Self::zero();
        p.add_term(degree, c);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (i32, T)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (k, c) in terms {
            p.add_term(k, c);
        }
        p
    }

    /// Ordinary polynomial from ascending coefficients `c_0, c_1, ...`.
    pub fn from_ascending(cs: &[T]) -> Self {
        Self::from_terms(cs.iter().cloned().enumerate().map(|(k, c)| (k as i32, c)))
    }

    fn add_term(&mut self, degree: i32, c: T) {
        if c.is_zero() {
            return;
        }
        let slot = self.coeffs.entry(degree).or_insert_with(T::zero);
        *slot = slot.clone() + c;
        if slot.is_zero() {
            self.coeffs.remove(&degree);
        }
    }

    pub fn coeff(&self, degree: i32) -> T {
        self.coeffs.get(&degree).cloned().unwrap_or_else(T::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i32, &T)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_deg(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Sum of |c_k|.
    pub fn mass(&self) -> f64 {
        self.coeffs.values().map(|c| c.to_f64_lossy().abs()).sum()
    }

    /// Sum of |c_k| over degrees `k < below`.
    pub fn mass_below(&self, below: i32) -> f64 {
        self.coeffs
            .range(..below)
            .map(|(_, c)| c.to_f64_lossy().abs())
            .sum()
    }

    /// Drop coefficients with |c| ≤ tol.
    pub fn pruned(&self, tol: f64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .filter(|(_, c)| !c.is_negligible(tol))
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, s: &T) -> Self {
        Self::from_terms(self.terms().map(|(k, c)| (k, c.clone() * s.clone())))
    }

    /// Multiply by `x^shift`.
    pub fn shift(&self, shift: i32) -> Self {
        Self {
            coeffs: self.terms().map(|(k, c)| (k + shift, c.clone())).collect(),
        }
    }

    /// `p(x) ↦ p(qx)`: coefficient of degree k multiplied by q^k.
    pub fn scale_arg(&self, q: &T) -> Result<Self> {
        if q.is_zero() {
            return Err(Error::InvalidParameter(
                "argument scaling by q = 0".into(),
            ));
        }
        Ok(Self::from_terms(
            self.terms().map(|(k, c)| (k, c.clone() * q.powi(k))),
        ))
    }

    /// Point evaluation `Σ c_k x^k`.
    pub fn eval(&self, x: &T) -> Result<T> {
        if x.is_zero() {
            if let Some(m) = self.min_deg().filter(|&m| m < 0) {
                return Err(Error::Pole(m));
            }
        }
        Ok(self
            .terms()
            .fold(T::zero(), |acc, (k, c)| acc + c.clone() * x.powi(k)))
    }

    /// Largest coefficientwise difference |a_k − b_k|.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self - other)
            .coeffs
            .values()
            .map(|c| c.to_f64_lossy().abs())
            .fold(0.0, f64::max)
    }
}

/// `laurent_scale_arg(p, q)`, i.e. `p(qx)`.
pub fn laurent_scale_arg<T: Scalar>(p: &LaurentPoly<T>, q: &T) -> Result<LaurentPoly<T>> {
    p.scale_arg(q)
}

impl<'a, T: Scalar> Add<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn add(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, c.clone());
        }
        out
    }
}

impl<'a, T: Scalar> Sub<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn sub(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k, -c.clone());
        }
        out
    }
}

impl<'a, T: Scalar> Mul<&'a LaurentPoly<T>> for &'a LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn mul(self, rhs: &'a LaurentPoly<T>) -> LaurentPoly<T> {
        let mut out = LaurentPoly::zero();
        for (i, a) in self.terms() {
            for (j, b) in rhs.terms() {
                out.add_term(i + j, a.clone() * b.clone());
            }
        }
        out
    }
}

impl<T: Scalar> Neg for &LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn neg(self) -> LaurentPoly<T> {
        LaurentPoly::from_terms(self.terms().map(|(k, c)| (k, -c.clone())))
    }
}

impl<T: Scalar> Add for LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn add(self, rhs: Self) -> Self {
        &self + &rhs
    }
}

impl<T: Scalar> Sub for LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn sub(self, rhs: Self) -> Self {
        &self - &rhs
    }
}

impl<T: Scalar> Mul for LaurentPoly<T> {
    type Output = LaurentPoly<T>;

    fn mul(self, rhs: Self) -> Self {
        &self * &rhs
    }
}
