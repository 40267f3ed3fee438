//! Dual picture on Laurent polynomials: `A` is multiplication by `x`, `Z` and
//! `B` are q-difference operators built from `T⁺f(x) = f(qx)` and
//! `T⁻f(x) = f(x/q)`.
//!
//! Results are returned unpruned so that cancellation can be inspected.

use crate::families::{big_q_jacobi, monic_polynomial};
use crate::numerics::{LaurentPoly, Scalar, TolerancePolicy};
use crate::opmatrix::ResidualReport;
use crate::representation::StructuredParams;
use crate::Result;

use super::build_z;

/// `E(x) f(qx) + F(x) f(x/q) − (E + F − c1 c2 q − 1) f(x)` with
/// `E = c1 q (x − 1)(c2 x − c3)/x²`, `F = (x − c1 q)(x − c3 q)/x²`.
pub fn qdiff_z_apply<T: Scalar>(f: &LaurentPoly<T>, p: &StructuredParams<T>) -> Result<LaurentPoly<T>> {
    p.validate()?;
    let q = &p.q;
    let (c1, c2, c3) = (&p.c1, &p.c2, &p.c3);
    let c1q = c1.clone() * q.clone();
    let e = LaurentPoly::from_terms([
        (0, c1q.clone() * c2.clone()),
        (-1, -(c1q.clone() * (c2.clone() + c3.clone()))),
        (-2, c1q.clone() * c3.clone()),
    ]);
    let fx = LaurentPoly::from_terms([
        (0, T::one()),
        (-1, -(q.clone() * (c1.clone() + c3.clone()))),
        (-2, c1q * c3.clone() * q.clone()),
    ]);
    let up = f.scale_arg(q)?;
    let down = f.scale_arg(&q.recip())?;
    let z0 = c1.clone() * c2.clone() * q.clone() + T::one();
    Ok(&(&(&e * &(&up - f)) + &(&fx * &(&down - f))) + &f.scale(&z0))
}

/// `((x − q c1)(x − q c3) / (q² (q−1) c1 c3 x)) f(x/q) + f(x) / ((1 − q) x)`.
pub fn qdiff_b_apply<T: Scalar>(f: &LaurentPoly<T>, p: &StructuredParams<T>) -> Result<LaurentPoly<T>> {
    p.validate()?;
    let q = &p.q;
    let (c1, c3) = (&p.c1, &p.c3);
    let one = T::one();
    let k = one.clone() / (q.clone() * q.clone() * (q.clone() - one.clone()) * c1.clone() * c3.clone());
    let coef = LaurentPoly::from_terms([
        (1, k.clone()),
        (0, -(k.clone() * q.clone() * (c1.clone() + c3.clone()))),
        (-1, k * q.clone() * q.clone() * c1.clone() * c3.clone()),
    ]);
    let down = f.scale_arg(&q.recip())?;
    let second = f.shift(-1).scale(&(one.clone() / (one - q.clone())));
    Ok(&(&coef * &down) + &second)
}

/// `x·B f − q B(x f) − f` for `f = x^k`, `k = 0..=k_max`: largest
/// coefficient per unit mass of the two operands `x·B f` and `q B(x f)`
/// (their terms of size `q^{−k}` cancel exactly, so that is the scale of
/// the rounding). Location is `(k, k)`.
pub fn qdiff_oscillator_check<T: Scalar>(
    p: &StructuredParams<T>,
    k_max: i32,
    pol: &TolerancePolicy,
) -> Result<ResidualReport> {
    let x = LaurentPoly::monomial(T::one(), 1);
    let mut worst = (0.0f64, 0usize);
    for k in 0..=k_max {
        let f = LaurentPoly::monomial(T::one(), k);
        let ab = &x * &qdiff_b_apply(&f, p)?;
        let ba = qdiff_b_apply(&(&x * &f), p)?.scale(&p.q);
        let dev = (&ab - &ba).max_abs_diff(&f) / (ab.mass() + ba.mass());
        if dev > worst.0 || dev.is_nan() {
            worst = (dev, k as usize);
        }
    }
    Ok(ResidualReport::from_value(worst.0, (worst.1, worst.1), 0..k_max as usize + 1, 1.0, pol))
}

/// `Z P_n − z_n P_n` for the monic big q-Jacobi polynomials, `n = 0..=n_max`,
/// relative to `|z_n|` times the coefficient mass of `P_n`.
pub fn qdiff_eigen_check<T: Scalar>(
    p: &StructuredParams<T>,
    n_max: usize,
    pol: &TolerancePolicy,
) -> Result<ResidualReport> {
    let rec = big_q_jacobi(p, n_max + 1)?;
    let z = build_z(p, n_max + 1).z;
    let mut worst = (0.0f64, 0usize);
    for (n, zn) in z.iter().enumerate() {
        let pn = monic_polynomial(&rec, n)?;
        let want = pn.scale(zn);
        let dev = qdiff_z_apply(&pn, p)?.max_abs_diff(&want) / want.mass();
        if dev > worst.0 || dev.is_nan() {
            worst = (dev, n);
        }
    }
    Ok(ResidualReport::from_value(worst.0, (worst.1, worst.1), 0..n_max + 1, 1.0, pol))
}
