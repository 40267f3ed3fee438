//! Tridiagonalization from the bispectral pair `(A, Z)`: `B` as a
//! q-commutator of `A` and `Z`, the operator `W = τ1 ZA + τ2 AZ + τ3 A + τ0 I`
//! and its monic reduction, the Askey–Wilson parameter map, the pencil
//! `A + μB + λI` and the dual q-difference realization.

mod qdiff;

pub use qdiff::{qdiff_b_apply, qdiff_eigen_check, qdiff_oscillator_check, qdiff_z_apply};

use serde::Serialize;

use crate::families::{askey_wilson, big_q_jacobi, jacobi_matrix, AWParams, FamilyParams, MonicRecurrence};
use crate::numerics::{check_q, Scalar, TolerancePolicy};
use crate::opmatrix::{band_mul, overflow_guard, BandMatrix, ResidualReport};
use crate::representation::row_relative_deviation;
use crate::representation::StructuredParams;
use crate::{Error, Result};

/// `Z = diag(z_n)`, `z_n = c1 c2 q^{n+1} + q^{−n}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiagonalOperator<T> {
    pub z: Vec<T>,
}

impl<T: Scalar> DiagonalOperator<T> {
    pub fn matrix(&self) -> BandMatrix<T> {
        BandMatrix::diagonal(self.z.clone())
    }

    /// Smallest pairwise relative gap `|z_i − z_j| / max(|z_i|, |z_j|)`.
    pub fn min_relative_gap(&self) -> f64 {
        let z: Vec<f64> = self.z.iter().map(|x| x.to_f64_lossy()).collect();
        let mut best = f64::INFINITY;
        for i in 0..z.len() {
            for j in i + 1..z.len() {
                let g = (z[i] - z[j]).abs() / z[i].abs().max(z[j].abs());
                best = best.min(g);
            }
        }
        best
    }

    pub fn is_distinct(&self) -> bool {
        if T::EXACT {
            (0..self.z.len()).all(|i| (i + 1..self.z.len()).all(|j| self.z[i] != self.z[j]))
        } else {
            self.min_relative_gap() > 1e-12
        }
    }
}

pub fn build_z<T: Scalar>(p: &StructuredParams<T>, size: usize) -> DiagonalOperator<T> {
    let c12 = p.c1.clone() * p.c2.clone();
    DiagonalOperator {
        z: (0..size as i32)
            .map(|n| c12.clone() * p.q.powi(n + 1) + p.q.powi(-n))
            .collect(),
    }
}

/// Big q-Jacobi Jacobi matrix (subdiagonal 1, superdiagonal `u_{n+1}`).
pub fn big_q_jacobi_matrix<T: Scalar>(p: &StructuredParams<T>, size: usize) -> Result<BandMatrix<T>> {
    overflow_guard(&p.q, size)?;
    Ok(jacobi_matrix(&big_q_jacobi(p, size)?))
}

/// `B = r1 ZA − q r1 AZ + r0 I`.
///
/// The diagonal `r1(1 − q) z_n b_n + r0` decays like `qⁿ` out of terms of
/// order one, so it is taken from its closed form `κ b̃_n`, where `b̃` is
/// the big q-Jacobi diagonal with `c1 ↔ c2`. The two agree identically.
pub fn build_b_from_a<T: Scalar>(p: &StructuredParams<T>, size: usize) -> Result<BandMatrix<T>> {
    p.validate()?;
    let mut b = b_from_jacobi(p, &big_q_jacobi_matrix(p, size)?)?;
    let kappa = p.kappa();
    for (n, bt) in big_q_jacobi(&p.swapped(), size)?.b.into_iter().enumerate() {
        b.set(n, n, kappa.clone() * bt);
    }
    Ok(b)
}

/// `r1(ZA − qAZ) + r0 I` by bands. With `z_n = c q^{n+1} + q^{−n}` the
/// differences are taken in closed form, `z_{n+1} − q z_n = q^{−n−1}(1 − q²)`
/// and `z_n − q z_{n+1} = c q^{n+1}(1 − q²)`; subtracting the `z` values
/// instead loses a factor `q^{−2n}` of precision on the superdiagonal.
fn b_from_jacobi<T: Scalar>(p: &StructuredParams<T>, a: &BandMatrix<T>) -> Result<BandMatrix<T>> {
    let size = a.size();
    let q = &p.q;
    let c = p.c1.clone() * p.c2.clone();
    let z = build_z(p, size).z;
    let (r0, r1) = (p.r0(), p.r1());
    let one_m_q2 = r1.clone() * (T::one() - q.clone() * q.clone());
    let mut sub = Vec::with_capacity(size);
    let mut sup = Vec::with_capacity(size);
    for n in 0..size.saturating_sub(1) {
        sub.push(one_m_q2.clone() * q.powi(-(n as i32) - 1) * a.get(n + 1, n));
        sup.push(one_m_q2.clone() * c.clone() * q.powi(n as i32 + 1) * a.get(n, n + 1));
    }
    let diag = (0..size)
        .map(|n| r1.clone() * (T::one() - q.clone()) * z[n].clone() * a.get(n, n) + r0.clone())
        .collect();
    BandMatrix::tridiagonal(sub, diag, sup)
}

/// Big q-Jacobi parameters of a finite family: `c3 = q^{−N−1}` for q-Hahn,
/// `c1 = c2 = q^{−(N+1)/2}` for q-para Krawtchouk.
pub fn finite_family_params<T: Scalar>(rec: &MonicRecurrence<T>) -> Result<StructuredParams<T>> {
    match &rec.params {
        FamilyParams::QHahn { q, c1, c2, n } => Ok(StructuredParams::new(
            q.clone(),
            c1.clone(),
            c2.clone(),
            q.powi(-(*n as i32) - 1),
        )),
        FamilyParams::QParaKrawtchouk { q, c3, n } => {
            let c = q.powi(-((*n as i32 + 1) / 2));
            Ok(StructuredParams::new(q.clone(), c.clone(), c, c3.clone()))
        }
        _ => Err(Error::UnsupportedFamily(format!(
            "{:?} is not a finite family",
            rec.family
        ))),
    }
}

/// The finite q-oscillator pair of a q-Hahn or q-para Krawtchouk
/// recurrence: `A` is its Jacobi matrix and `B = r1(ZA − qAZ) + r0 I`.
/// The natural truncation `u_{N+1} = 0` makes `AB − qBA = I` hold on every
/// row.
pub fn finite_family_pair<T: Scalar>(
    rec: &MonicRecurrence<T>,
) -> Result<(BandMatrix<T>, BandMatrix<T>)> {
    let p = finite_family_params(rec)?;
    let a = jacobi_matrix(rec);
    let b = b_from_jacobi(&p, &a)?;
    Ok((a, b))
}

/// Coefficients of `W = τ1 ZA + τ2 AZ + τ3 A + τ0 I`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WCoeffs<T> {
    pub tau0: T,
    pub tau1: T,
    pub tau2: T,
    pub tau3: T,
}

impl<T: Scalar> WCoeffs<T> {
    pub fn new(tau0: T, tau1: T, tau2: T, tau3: T) -> Self {
        Self {
            tau0,
            tau1,
            tau2,
            tau3,
        }
    }

    pub fn to_f64(&self) -> WCoeffs<f64> {
        WCoeffs::new(
            self.tau0.to_f64_lossy(),
            self.tau1.to_f64_lossy(),
            self.tau2.to_f64_lossy(),
            self.tau3.to_f64_lossy(),
        )
    }
}

/// `W` by its three bands. With `z_n = c q^{n+1} + q^{−n}`, `α = τ1 q + τ2`
/// and `β = τ1 + τ2 q` the off-diagonal combinations group by power,
/// `τ1 z_{n+1} + τ2 z_n = c q^{n+1} α + q^{−n} β/q` and
/// `τ1 z_n + τ2 z_{n+1} = c q^{n+1} β + q^{−n} α/q`,
/// so the choice `τ2 = −q τ1` removes both growing parts exactly, in floating
/// point too.
///
/// * sub `(n+1, n)`: `τ1 z_{n+1} + τ2 z_n + τ3`
/// * diag: `((τ1 + τ2) z_n + τ3) b_n + τ0`
/// * super `(n, n+1)`: `(τ1 z_n + τ2 z_{n+1} + τ3) u_{n+1}`
pub fn build_w<T: Scalar>(p: &StructuredParams<T>, w: &WCoeffs<T>, size: usize) -> Result<BandMatrix<T>> {
    let rec = big_q_jacobi(p, size)?;
    overflow_guard(&p.q, size)?;
    let q = &p.q;
    let c = p.c1.clone() * p.c2.clone();
    let z = build_z(p, size).z;
    let (t0, t1, t2, t3) = (&w.tau0, &w.tau1, &w.tau2, &w.tau3);
    let alpha = t1.clone() * q.clone() + t2.clone();
    let beta = t1.clone() + t2.clone() * q.clone();
    let (grow_sub, decay_sub) = (alpha.clone(), beta.clone() / q.clone());
    let (grow_sup, decay_sup) = (beta, alpha / q.clone());
    let mut sub = Vec::with_capacity(size);
    let mut sup = Vec::with_capacity(size);
    for n in 0..size.saturating_sub(1) {
        let up = c.clone() * q.powi(n as i32 + 1);
        let down = q.powi(-(n as i32));
        sub.push(up.clone() * grow_sub.clone() + down.clone() * decay_sub.clone() + t3.clone());
        sup.push(
            (up * grow_sup.clone() + down * decay_sup.clone() + t3.clone()) * rec.u[n].clone(),
        );
    }
    let diag = (0..size)
        .map(|n| {
            ((t1.clone() + t2.clone()) * z[n].clone() + t3.clone()) * rec.b[n].clone() + t0.clone()
        })
        .collect();
    BandMatrix::tridiagonal(sub, diag, sup)
}

/// `W` formed literally from the matrix products `ZA`, `AZ`.
pub fn build_w_by_products<T: Scalar>(
    p: &StructuredParams<T>,
    w: &WCoeffs<T>,
    size: usize,
) -> Result<BandMatrix<T>> {
    let a = big_q_jacobi_matrix(p, size)?;
    let z = build_z(p, size).matrix();
    let za = band_mul(&z, &a)?;
    let az = band_mul(&a, &z)?;
    let m = BandMatrix::lincomb(&[(w.tau1.clone(), &za), (w.tau2.clone(), &az), (w.tau3.clone(), &a)])?;
    Ok(m.add_identity(&w.tau0))
}

/// Diagonal similarity `D⁻¹ W D` with unit subdiagonal (`d_0 = 1`,
/// `d_{n+1} = sub_n d_n`). Returns `b̃_n = W_nn`, `ũ_{n+1} = sub_n sup_n`
/// and the diagonal `d`.
pub fn to_monic<T: Scalar>(
    w: &BandMatrix<T>,
    pol: &TolerancePolicy,
) -> Result<(MonicRecurrence<T>, Vec<T>)> {
    if !w.is_tridiagonal() {
        return Err(Error::InvalidParameter("W is not tridiagonal".into()));
    }
    let n = w.size();
    let mut d = Vec::with_capacity(n);
    d.push(T::one());
    let mut u = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(1) {
        let sub = w.get(k + 1, k);
        if sub.is_negligible(pol.abs_tol) {
            return Err(Error::NotMonic(k + 1));
        }
        u.push(sub.clone() * w.get(k, k + 1));
        let next = d[k].clone() * sub;
        d.push(next);
    }
    let rec = MonicRecurrence::custom(w.diag().to_vec(), u)?;
    Ok((rec, d))
}

/// Askey–Wilson map: `c1 = a1 a2/q`, `c2 = a3 a4/q`, `c3 = a1 a3/q`,
/// `τ1 = 1/(2 a1 a2 a3 (q − 1/q))`, `τ2 = −q τ1`, `τ3 = 1/(2 a1)`,
/// `τ0 = (q(a2 + a3) + a2 a3 (a1 + a4)) / (2 (q+1) a2 a3)`.
pub fn aw_parameter_map<T: Scalar>(p: &AWParams<T>) -> Result<(StructuredParams<T>, WCoeffs<T>)> {
    check_q(&p.q, false)?;
    if p.a1.is_zero() || p.a2.is_zero() || p.a3.is_zero() {
        return Err(Error::InvalidParameter("a1 a2 a3 must be nonzero".into()));
    }
    let q = &p.q;
    let one = T::one();
    let two = T::from_int(2);
    let sp = StructuredParams::new(
        q.clone(),
        p.a1.clone() * p.a2.clone() / q.clone(),
        p.a3.clone() * p.a4.clone() / q.clone(),
        p.a1.clone() * p.a3.clone() / q.clone(),
    );
    let a23 = p.a2.clone() * p.a3.clone();
    let tau1 = one.clone() / (two.clone() * p.a1.clone() * a23.clone() * (q.clone() - q.recip()));
    let tau2 = -(q.clone() * tau1.clone());
    let tau3 = one.clone() / (two.clone() * p.a1.clone());
    let tau0 = (q.clone() * (p.a2.clone() + p.a3.clone())
        + a23.clone() * (p.a1.clone() + p.a4.clone()))
        / (two * (q.clone() + one) * a23);
    Ok((sp, WCoeffs::new(tau0, tau1, tau2, tau3)))
}

/// Monic reduction of the mapped `W` against the Askey–Wilson recurrence,
/// coefficients `n < count`. Deviation is entrywise over the two monic
/// Jacobi matrices, relative to the larger of the target entry and its row
/// sum.
pub fn aw_match<T: Scalar>(p: &AWParams<T>, count: usize, pol: &TolerancePolicy) -> Result<ResidualReport> {
    let (sp, w) = aw_parameter_map(p)?;
    let (got, _) = to_monic(&build_w(&sp, &w, count)?, pol)?;
    let want = askey_wilson(p, count)?;
    let (dev, loc) = row_relative_deviation(&jacobi_matrix(&got), &jacobi_matrix(&want));
    Ok(ResidualReport::from_value(dev, loc, 0..count, 1.0, pol))
}

/// Pencil parameters `(μ, λ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PencilParams<T> {
    pub mu: T,
    pub lambda: T,
}

impl<T: Scalar> PencilParams<T> {
    pub fn new(mu: T, lambda: T) -> Self {
        Self { mu, lambda }
    }
}

/// `C = A + μB + λI` from the matrices.
pub fn pencil<T: Scalar>(
    p: &StructuredParams<T>,
    pp: &PencilParams<T>,
    size: usize,
) -> Result<BandMatrix<T>> {
    let a = big_q_jacobi_matrix(p, size)?;
    let b = build_b_from_a(p, size)?;
    let c = BandMatrix::lincomb(&[(T::one(), &a), (pp.mu.clone(), &b)])?;
    Ok(c.add_identity(&pp.lambda))
}

/// Closed-form bands of the pencil:
///
/// * sub `(n+1, n)`: `1 + μ r1 (z_{n+1} − q z_n)`
/// * diag: `μ r0 + λ + b_n (1 + μ (1−q) r1 z_n)`
/// * super `(n, n+1)`: `u_{n+1} (1 + μ r1 (z_n − q z_{n+1}))`
pub fn pencil_bands<T: Scalar>(
    p: &StructuredParams<T>,
    pp: &PencilParams<T>,
    size: usize,
) -> Result<BandMatrix<T>> {
    let rec = big_q_jacobi(p, size)?;
    overflow_guard(&p.q, size)?;
    let z = build_z(p, size).z;
    let q = &p.q;
    let one = T::one();
    let mr1 = pp.mu.clone() * p.r1();
    let sub = (0..size - 1)
        .map(|n| one.clone() + mr1.clone() * (z[n + 1].clone() - q.clone() * z[n].clone()))
        .collect();
    let sup = (0..size - 1)
        .map(|n| {
            rec.u[n].clone() * (one.clone() + mr1.clone() * (z[n].clone() - q.clone() * z[n + 1].clone()))
        })
        .collect();
    let diag = (0..size)
        .map(|n| {
            pp.mu.clone() * p.r0()
                + pp.lambda.clone()
                + rec.b[n].clone()
                    * (one.clone() + mr1.clone() * (one.clone() - q.clone()) * z[n].clone())
        })
        .collect();
    BandMatrix::tridiagonal(sub, diag, sup)
}

/// The pencil as a `W`: `τ1 = μ r1`, `τ2 = −q μ r1`, `τ3 = 1`, `τ0 = μ r0 + λ`.
pub fn pencil_as_w<T: Scalar>(p: &StructuredParams<T>, pp: &PencilParams<T>) -> WCoeffs<T> {
    let mr1 = pp.mu.clone() * p.r1();
    WCoeffs::new(
        pp.mu.clone() * p.r0() + pp.lambda.clone(),
        mr1.clone(),
        -(p.q.clone() * mr1),
        T::one(),
    )
}

/// Affine relation between the Askey–Wilson `W` and a pencil: with
/// `(sp, w) = aw_parameter_map(p)` and `μ = τ1 / (r1 τ3)`,
/// `W = τ3 · pencil(sp, (μ, 0)) + (τ0 − τ3 μ r0) I`.
/// Returns `(μ, scale τ3, shift)`.
pub fn aw_pencil_relation<T: Scalar>(p: &AWParams<T>) -> Result<(T, T, T)> {
    let (sp, w) = aw_parameter_map(p)?;
    let mu = w.tau1.clone() / (sp.r1() * w.tau3.clone());
    let shift = w.tau0.clone() - w.tau3.clone() * mu.clone() * sp.r0();
    Ok((mu, w.tau3, shift))
}
