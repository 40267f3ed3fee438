use serde::Serialize;

use super::{s_from_initial, GeneralParams};
use crate::families::big_q_jacobi;
use crate::numerics::{check_q, Scalar, TolerancePolicy};
use crate::opmatrix::ResidualReport;
use crate::tridiagonalization::build_b_from_a;
use crate::{Error, Result};

/// Big q-Jacobi parameters `(c1, c2, c3)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StructuredParams<T> {
    pub q: T,
    pub c1: T,
    pub c2: T,
    pub c3: T,
}

impl<T: Scalar> StructuredParams<T> {
    pub fn new(q: T, c1: T, c2: T, c3: T) -> Self {
        Self { q, c1, c2, c3 }
    }

    pub fn validate(&self) -> Result<()> {
        check_q(&self.q, false)?;
        if self.c1.is_zero() || self.c3.is_zero() {
            return Err(Error::InvalidParameter("c1 c3 must be nonzero".into()));
        }
        Ok(())
    }

    pub fn to_f64(&self) -> StructuredParams<f64> {
        StructuredParams::new(
            self.q.to_f64_lossy(),
            self.c1.to_f64_lossy(),
            self.c2.to_f64_lossy(),
            self.c3.to_f64_lossy(),
        )
    }

    /// Parameters with `c1` and `c2` interchanged.
    pub fn swapped(&self) -> Self {
        Self::new(self.q.clone(), self.c2.clone(), self.c1.clone(), self.c3.clone())
    }

    /// `r0 = (c1(c2+1) + c3(c1+1)) / (c1 c3 (1 − q²))`.
    pub fn r0(&self) -> T {
        let one = T::one();
        let q = &self.q;
        (self.c1.clone() * (self.c2.clone() + one.clone())
            + self.c3.clone() * (self.c1.clone() + one.clone()))
            / (self.c1.clone() * self.c3.clone() * (one - q.clone() * q.clone()))
    }

    /// `r1 = −1 / (c1 c3 q (q+1) (1−q)²)`.
    pub fn r1(&self) -> T {
        let one = T::one();
        let q = &self.q;
        let omq = one.clone() - q.clone();
        -(one.clone()
            / (self.c1.clone() * self.c3.clone() * q.clone() * (q.clone() + one) * omq.clone() * omq))
    }

    /// Scale between the diagonal of B and the big q-Jacobi diagonal with
    /// `c1 ↔ c2`: `κ = 1/(c3 q (1 − q))`.
    pub fn kappa(&self) -> T {
        T::one() / (self.c3.clone() * self.q.clone() * (T::one() - self.q.clone()))
    }

    /// `ξ0` of the pair `(A, B)` built from these parameters (σ = 1):
    /// `1/((q−1) c1 c3 q)`.
    pub fn xi0(&self) -> T {
        T::one() / ((self.q.clone() - T::one()) * self.c1.clone() * self.c3.clone() * self.q.clone())
    }
}

/// General parameters whose construction reproduces the big q-Jacobi pair up
/// to the scaling `b = σ b^J`, `u = σ² u^J`, `η = η^B / σ`.
///
/// `(q − 1) ξ0 c1 c3 q σ² = 1` and `ζ0 = c1 c2 ξ0`.
pub fn general_from_structured<T: Scalar>(
    p: &StructuredParams<T>,
    sigma: &T,
) -> Result<GeneralParams<T>> {
    p.validate()?;
    if sigma.is_zero() {
        return Err(Error::InvalidParameter("sigma must be nonzero".into()));
    }
    let q = &p.q;
    let xi0 = p.xi0() / (sigma.clone() * sigma.clone());
    let zeta0 = p.c1.clone() * p.c2.clone() * xi0.clone();
    let bj0 = big_q_jacobi(p, 1)?.b[0].clone();
    let z0 = p.c1.clone() * p.c2.clone() * q.clone() + T::one();
    let eta_b0 = p.r1() * (T::one() - q.clone()) * z0 * bj0.clone() + p.r0();
    let b0 = sigma.clone() * bj0;
    let eta0 = eta_b0 / sigma.clone();
    let (s1, s2) = s_from_initial(q, &xi0, &zeta0, &b0, &eta0);
    Ok(GeneralParams::new(q.clone(), xi0, zeta0, s1, s2))
}

/// Identification of B with the big q-Jacobi recurrence for `c1 ↔ c2`:
/// `η_n = κ b̃_n` and `ξ_n ζ_n u_n = κ² ũ_n`.
///
/// The deviation of each entry is measured relative to the larger of the
/// target and the row scale of B.
pub fn b_side_identification<T: Scalar>(
    p: &StructuredParams<T>,
    size: usize,
    pol: &TolerancePolicy,
) -> Result<ResidualReport> {
    let b = build_b_from_a(p, size)?;
    let rec = big_q_jacobi(&p.swapped(), size)?;
    let kappa = p.kappa();
    let bf = b.to_f64();
    let row_scale = |i: usize| -> f64 { (0..size).map(|j| bf.get(i, j).abs()).sum() };

    let mut worst = (0.0f64, (0usize, 0usize));
    let mut note = |dev: f64, loc: (usize, usize)| {
        if dev > worst.0 || dev.is_nan() {
            worst = (dev, loc);
        }
    };
    for n in 0..size {
        let target = (kappa.clone() * rec.b[n].clone()).to_f64_lossy();
        let got = b.get(n, n).to_f64_lossy();
        note((got - target).abs() / target.abs().max(row_scale(n)), (n, n));
    }
    for n in 1..size {
        let target = (kappa.clone() * kappa.clone() * rec.u_n(n)).to_f64_lossy();
        let got = (b.get(n, n - 1) * b.get(n - 1, n)).to_f64_lossy();
        let scale = row_scale(n) * row_scale(n - 1);
        note((got - target).abs() / target.abs().max(scale), (n - 1, n));
    }
    Ok(ResidualReport::from_value(worst.0, worst.1, 0..size, 1.0, pol))
}
