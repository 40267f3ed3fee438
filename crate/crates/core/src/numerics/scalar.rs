//! Scalar abstraction shared by every construction in the crate.
//!
//! Closed-form coefficients are rational functions of the parameters, so the
//! same code runs in binary floating point (the production path) and in exact
//! big rationals (the certification path). Tolerance decisions are always
//! taken in `f64`.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// Field element usable by the operator constructions.
pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` when arithmetic is exact (no rounding).
    const EXACT: bool;

    /// Integer power, negative exponents allowed. Panics on `0^(-n)`.
    fn powi(&self, n: i32) -> Self;

    /// Lossy conversion used for tolerance decisions and reporting.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Conversion from a double. Exact types take the binary value exactly.
    fn from_f64_lossy(x: f64) -> Self;

    /// Whether the value counts as zero at absolute threshold `tol`.
    /// Exact types only treat an exact zero as negligible.
    fn is_negligible(&self, tol: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64_lossy().abs() <= tol
        }
    }

    fn recip(&self) -> Self {
        Self::one() / self.clone()
    }

    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer conversion")
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn powi(&self, n: i32) -> Self {
        f64::powi(*self, n)
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn from_f64_lossy(x: f64) -> Self {
        x
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn powi(&self, n: i32) -> Self {
        f32::powi(*self, n)
    }

    fn to_f64_lossy(&self) -> f64 {
        f64::from(*self)
    }

    fn from_f64_lossy(x: f64) -> Self {
        x as f32
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn powi(&self, n: i32) -> Self {
        let p = num_traits::pow(self.clone(), n.unsigned_abs() as usize);
        if n < 0 {
            p.recip()
        } else {
            p
        }
    }

    fn from_f64_lossy(x: f64) -> Self {
        BigRational::from_float(x).expect("finite value")
    }
}

/// Build an exact rational `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Unit in the last place of a double (spacing above |x|).
pub fn ulp(x: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        return f64::MIN_POSITIVE;
    }
    let next = f64::from_bits(a.to_bits() + 1);
    next - a
}

pub(crate) fn check_q<T: Scalar>(q: &T, allow_minus_one: bool) -> crate::Result<()> {
    if q.is_zero() {
        return Err(crate::Error::InvalidParameter("q must be nonzero".into()));
    }
    if q.is_one() {
        return Err(crate::Error::InvalidParameter("q must differ from 1".into()));
    }
    if !allow_minus_one && (-q.clone()).is_one() {
        return Err(crate::Error::InvalidParameter("q must differ from -1".into()));
    }
    Ok(())
}

/// Relative threshold below which a structural factor counts as vanishing.
pub(crate) const RESONANCE_REL: f64 = 1e-10;

/// Whether `x` vanishes relative to the magnitude `scale` of the terms that
/// produced it (exactly zero for exact types).
pub(crate) fn vanishes<T: Scalar>(x: &T, scale: f64) -> bool {
    if T::EXACT {
        x.is_zero()
    } else {
        let v = x.to_f64_lossy();
        !v.is_finite() || v.abs() <= RESONANCE_REL * scale
    }
}
