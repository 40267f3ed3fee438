//! Structure constants and residual checks for the big q-Jacobi algebra
//! generated by `(A, B, Z)` and the Askey–Wilson algebra generated by
//! `(L, M, Z)` with `L = A + μB`, `M = LZ − qZL − ω0 I`.

use serde::{Deserialize, Serialize};

use crate::numerics::{Scalar, TolerancePolicy};
use crate::opmatrix::{q_commutator, BandMatrix, ResidualReport, Truncated};
use crate::representation::StructuredParams;
use crate::tridiagonalization::{big_q_jacobi_matrix, build_b_from_a, build_z};
use crate::{Error, Result};

/// `AB − qBA = I`, `BZ − qZB = γ1 A + δ1 I`, `ZA − qAZ = γ2 B + δ2 I`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BigQJacobiConstants<T> {
    pub gamma1: T,
    pub delta1: T,
    pub gamma2: T,
    pub delta2: T,
}

fn sums<T: Scalar>(p: &StructuredParams<T>) -> (T, T, T) {
    let one = T::one();
    let (c1, c2, c3) = (&p.c1, &p.c2, &p.c3);
    // c1(c2+1) + c3(c1+1), c3(c2+1) + c2(c1+1), c1 c2 (1/c3 + 1) + c1 + c2 + c3 + 1
    (
        c1.clone() * (c2.clone() + one.clone()) + c3.clone() * (c1.clone() + one.clone()),
        c3.clone() * (c2.clone() + one.clone()) + c2.clone() * (c1.clone() + one.clone()),
        c1.clone() * c2.clone() * (c3.recip() + one.clone())
            + c1.clone()
            + c2.clone()
            + c3.clone()
            + one,
    )
}

impl<T: Scalar> BigQJacobiConstants<T> {
    /// `γ1 = −c2(q+1)/(c3 q)`, `δ1 = c2(c1+1)/c3 + c2 + 1`,
    /// `γ2 = −c1 c3 q (q+1)(1−q)²`, `δ2 = q(1−q)(c1(c2+1) + c3(c1+1)) = −r0 γ2`.
    pub fn new(p: &StructuredParams<T>) -> Self {
        let one = T::one();
        let q = &p.q;
        let (c1, c2, c3) = (&p.c1, &p.c2, &p.c3);
        let (s13, _, _) = sums(p);
        let omq = one.clone() - q.clone();
        Self {
            gamma1: -(c2.clone() * (q.clone() + one.clone()) / (c3.clone() * q.clone())),
            delta1: c2.clone() * (c1.clone() + one.clone()) / c3.clone() + c2.clone() + one.clone(),
            gamma2: -(c1.clone() * c3.clone() * q.clone() * (q.clone() + one) * omq.clone() * omq.clone()),
            delta2: q.clone() * omq * s13,
        }
    }
}

/// Constants of `ZM − qMZ = σ1 L + ω1 I` and `ML − qLM = σ2 Z + ω2 I`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AWAlgebraConstants<T> {
    pub omega0: T,
    pub sigma1: T,
    pub omega1: T,
    pub sigma2: T,
    pub omega2: T,
}

impl<T: Scalar> AWAlgebraConstants<T> {
    /// * `ω0 = μ (c3(c2+1) + c2(c1+1))/c3 − q(q−1)(c3(c1+1) + c1(c2+1))`
    /// * `σ1 = c1 c2 (q²−1)²`
    /// * `ω1 = c2 μ (q²−1)(c3(c1+1) + c1(c2+1))/c3 − c1 q (q+1)(q−1)² (c3(c2+1) + c2(c1+1))`
    /// * `σ2 = μ (1−q)(q+1)²/q`
    /// * `ω2 = μ (q²−1)(c1 c2 (1/c3 + 1) + c1 + c2 + c3 + 1) − c1 c3 q (q+1)(q−1)² − μ² (q+1) c2/(q c3)`
    pub fn new(p: &StructuredParams<T>, mu: &T) -> Self {
        let one = T::one();
        let q = &p.q;
        let (c1, c2, c3) = (&p.c1, &p.c2, &p.c3);
        let (s13, s32, s_all) = sums(p);
        let qm1 = q.clone() - one.clone();
        let qp1 = q.clone() + one.clone();
        let q2m1 = q.clone() * q.clone() - one.clone();
        Self {
            omega0: mu.clone() * s32.clone() / c3.clone() - q.clone() * qm1.clone() * s13.clone(),
            sigma1: c1.clone() * c2.clone() * q2m1.clone() * q2m1.clone(),
            omega1: c2.clone() * mu.clone() * q2m1.clone() * s13 / c3.clone()
                - c1.clone() * q.clone() * qp1.clone() * qm1.clone() * qm1.clone() * s32,
            sigma2: mu.clone() * (one - q.clone()) * qp1.clone() * qp1.clone() / q.clone(),
            omega2: mu.clone() * q2m1 * s_all
                - c1.clone() * c3.clone() * q.clone() * qp1.clone() * qm1.clone() * qm1
                - mu.clone() * mu.clone() * qp1 * c2.clone() / (q.clone() * c3.clone()),
        }
    }
}

fn relation_report<T: Scalar>(
    lhs: &Truncated<T>,
    rhs: &[(T, &BandMatrix<T>)],
    scale: f64,
    pol: &TolerancePolicy,
) -> Result<ResidualReport> {
    let mut terms = vec![(T::one(), &lhs.matrix)];
    terms.extend(rhs.iter().map(|(c, m)| (-c.clone(), *m)));
    let defect = Truncated {
        matrix: BandMatrix::lincomb(&terms)?,
        valid_rows: lhs.valid_rows,
    };
    Ok(defect.report(scale, pol))
}

/// Residuals of the three big q-Jacobi algebra relations with the given
/// constants, on the rows unaffected by truncation.
pub fn big_qjacobi_algebra_residuals_with<T: Scalar>(
    p: &StructuredParams<T>,
    k: &BigQJacobiConstants<T>,
    size: usize,
    pol: &TolerancePolicy,
) -> Result<[ResidualReport; 3]> {
    if size < 4 {
        return Err(Error::TooSmall { size, min: 4 });
    }
    let a = big_q_jacobi_matrix(p, size)?;
    let b = build_b_from_a(p, size)?;
    let z = build_z(p, size).matrix();
    let id = BandMatrix::identity(size);
    let (na, nb, nz) = (a.norm_inf(), b.norm_inf(), z.norm_inf());
    let (ta, tb, tz) = (
        Truncated::exact(a.clone()),
        Truncated::exact(b.clone()),
        Truncated::exact(z.clone()),
    );
    let q = &p.q;
    let r1 = relation_report(&q_commutator(&ta, &tb, q)?, &[(T::one(), &id)], pol.scale_for(na, nb), pol)?;
    let r2 = relation_report(
        &q_commutator(&tb, &tz, q)?,
        &[(k.gamma1.clone(), &a), (k.delta1.clone(), &id)],
        pol.scale_for(nb, nz),
        pol,
    )?;
    let r3 = relation_report(
        &q_commutator(&tz, &ta, q)?,
        &[(k.gamma2.clone(), &b), (k.delta2.clone(), &id)],
        pol.scale_for(nz, na),
        pol,
    )?;
    Ok([r1, r2, r3])
}

pub fn big_qjacobi_algebra_residuals<T: Scalar>(
    p: &StructuredParams<T>,
    size: usize,
    pol: &TolerancePolicy,
) -> Result<[ResidualReport; 3]> {
    big_qjacobi_algebra_residuals_with(p, &BigQJacobiConstants::new(p), size, pol)
}

/// Operand order of the second Askey–Wilson relation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ordering {
    /// `ML − qLM = σ2 Z + ω2 I`
    ML,
    /// `LM − qML = σ2 Z + ω2 I`
    LM,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AwAlgebraReport {
    /// Product route for `M` against its band formula
    /// `M_ij = L_ij (z_j − q z_i) − ω0 δ_ij`.
    pub m_definition: ResidualReport,
    /// `ZM − qMZ − σ1 L − ω1 I`.
    pub zm: ResidualReport,
    /// Second relation in the requested order.
    pub second: ResidualReport,
    pub ordering: Ordering,
}

impl AwAlgebraReport {
    pub fn pass(&self) -> bool {
        self.m_definition.pass && self.zm.pass && self.second.pass
    }
}

struct AwOperators<T> {
    l: Truncated<T>,
    z: Truncated<T>,
    /// `M` from its band formula; the relations use this one.
    m: Truncated<T>,
    /// `M` as the literal q-commutator `LZ − qZL − ω0 I`.
    m_product: BandMatrix<T>,
    m_formula: BandMatrix<T>,
}

fn aw_operators<T: Scalar>(
    p: &StructuredParams<T>,
    mu: &T,
    k: &AWAlgebraConstants<T>,
    size: usize,
) -> Result<AwOperators<T>> {
    if size < 5 {
        return Err(Error::TooSmall { size, min: 5 });
    }
    if mu.is_zero() {
        return Err(Error::InvalidParameter("mu must be nonzero".into()));
    }
    let a = big_q_jacobi_matrix(p, size)?;
    let b = build_b_from_a(p, size)?;
    let l = BandMatrix::lincomb(&[(T::one(), &a), (mu.clone(), &b)])?;
    let zs = build_z(p, size).z;
    let z = Truncated::exact(BandMatrix::diagonal(zs.clone()));
    let lt = Truncated::exact(l.clone());
    let m_product = q_commutator(&lt, &z, &p.q)?.add_identity(&-k.omega0.clone());

    // z_j − q z_i in closed form: subtracting the z values loses a factor
    // q^{−2i} of precision on the subdiagonal, which ZM − qMZ then amplifies.
    let q = &p.q;
    let c = p.c1.clone() * p.c2.clone();
    let one_m_q2 = T::one() - q.clone() * q.clone();
    let zdiff = |i: usize, j: usize| -> T {
        if j == i {
            (T::one() - q.clone()) * zs[i].clone()
        } else if j == i + 1 {
            one_m_q2.clone() * q.powi(-(i as i32) - 1)
        } else {
            one_m_q2.clone() * c.clone() * q.powi(i as i32)
        }
    };
    let mut m_formula = BandMatrix::zeros(size, 1, 1);
    for (i, j, v) in l.entries() {
        let mut e = v.clone() * zdiff(i, j);
        if i == j {
            e = e - k.omega0.clone();
        }
        m_formula.set(i, j, e);
    }
    Ok(AwOperators {
        l: lt,
        z,
        m: Truncated::exact(m_formula.clone()),
        m_product: m_product.matrix,
        m_formula,
    })
}

fn second_relation<T: Scalar>(
    ops: &AwOperators<T>,
    k: &AWAlgebraConstants<T>,
    q: &T,
    ordering: Ordering,
    pol: &TolerancePolicy,
) -> Result<ResidualReport> {
    let lhs = match ordering {
        Ordering::ML => q_commutator(&ops.m, &ops.l, q)?,
        Ordering::LM => q_commutator(&ops.l, &ops.m, q)?,
    };
    let id = BandMatrix::identity(ops.l.matrix.size());
    relation_report(
        &lhs,
        &[(k.sigma2.clone(), &ops.z.matrix), (k.omega2.clone(), &id)],
        pol.scale_for(ops.m.matrix.norm_inf(), ops.l.matrix.norm_inf()),
        pol,
    )
}

pub fn aw_algebra_residuals_with<T: Scalar>(
    p: &StructuredParams<T>,
    mu: &T,
    k: &AWAlgebraConstants<T>,
    size: usize,
    pol: &TolerancePolicy,
    ordering: Ordering,
) -> Result<AwAlgebraReport> {
    let ops = aw_operators(p, mu, k, size)?;
    let diff = BandMatrix::lincomb(&[(T::one(), &ops.m_product), (-T::one(), &ops.m_formula)])?;
    let m_definition = ResidualReport::from_defect(
        &diff,
        0..size,
        pol.scale_for(ops.l.matrix.norm_inf(), ops.z.matrix.norm_inf()),
        pol,
    );
    let id = BandMatrix::identity(size);
    let zm = relation_report(
        &q_commutator(&ops.z, &ops.m, &p.q)?,
        &[(k.sigma1.clone(), &ops.l.matrix), (k.omega1.clone(), &id)],
        pol.scale_for(ops.z.matrix.norm_inf(), ops.m.matrix.norm_inf()),
        pol,
    )?;
    let second = second_relation(&ops, k, &p.q, ordering, pol)?;
    Ok(AwAlgebraReport {
        m_definition,
        zm,
        second,
        ordering,
    })
}

pub fn aw_algebra_residuals<T: Scalar>(
    p: &StructuredParams<T>,
    mu: &T,
    size: usize,
    pol: &TolerancePolicy,
    ordering: Ordering,
) -> Result<AwAlgebraReport> {
    aw_algebra_residuals_with(p, mu, &AWAlgebraConstants::new(p, mu), size, pol, ordering)
}

/// Both operand orders of the second relation, measured side by side.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderingResolution {
    pub ml: ResidualReport,
    pub lm: ResidualReport,
    pub passing: Vec<Ordering>,
}

pub fn resolve_ordering<T: Scalar>(
    p: &StructuredParams<T>,
    mu: &T,
    size: usize,
    pol: &TolerancePolicy,
) -> Result<OrderingResolution> {
    let k = AWAlgebraConstants::new(p, mu);
    let ops = aw_operators(p, mu, &k, size)?;
    let ml = second_relation(&ops, &k, &p.q, Ordering::ML, pol)?;
    let lm = second_relation(&ops, &k, &p.q, Ordering::LM, pol)?;
    let passing = [(Ordering::ML, &ml), (Ordering::LM, &lm)]
        .iter()
        .filter(|(_, r)| r.pass)
        .map(|(o, _)| *o)
        .collect();
    Ok(OrderingResolution { ml, lm, passing })
}
