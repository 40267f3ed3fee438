//! Big q-Jacobi, Askey–Wilson, q-Hahn and q-para Krawtchouk recurrences,
//! monic polynomial evaluation and spectrum checks for the finite families.
//!
//! Every coefficient is assembled from factors `(1 − t)`; the combinations
//! `1 − D_n` are evaluated with the constant terms cancelled symbolically so
//! the diagonal keeps full relative accuracy when `D_n → 1`.

use serde::{Deserialize, Serialize};

use crate::numerics::{check_q, vanishes, FactorRatio, LaurentPoly, Scalar, TolerancePolicy};
use crate::opmatrix::{char_poly_eval, eigenvalues, BandMatrix, ResidualReport};
use crate::representation::StructuredParams;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    BigQJacobi,
    AskeyWilson,
    QHahn,
    QParaKrawtchouk,
    Custom,
}

/// Askey–Wilson parameters `(a1, a2, a3, a4)` with `g = a1 a2 a3 a4`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AWParams<T> {
    pub q: T,
    pub a1: T,
    pub a2: T,
    pub a3: T,
    pub a4: T,
}

impl<T: Scalar> AWParams<T> {
    pub fn new(q: T, a1: T, a2: T, a3: T, a4: T) -> Self {
        Self { q, a1, a2, a3, a4 }
    }

    pub fn g(&self) -> T {
        self.a1.clone() * self.a2.clone() * self.a3.clone() * self.a4.clone()
    }

    pub fn validate(&self) -> Result<()> {
        check_q(&self.q, false)?;
        if self.a1.is_zero() {
            return Err(Error::InvalidParameter("a1 must be nonzero".into()));
        }
        Ok(())
    }
}

/// Source parameters of a recurrence.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilyParams<T> {
    BigQJacobi(StructuredParams<T>),
    AskeyWilson(AWParams<T>),
    QHahn { q: T, c1: T, c2: T, n: usize },
    QParaKrawtchouk { q: T, c3: T, n: usize },
    Custom,
}

/// Recurrence `P_{n+1} = (x − b_n) P_n − u_n P_{n−1}` with `P_0 = 1`.
///
/// `u[k]` holds `u_{k+1}`; `u_next` is the first coefficient past the end
/// (`u_{len}`), zero for a natural truncation and `None` when unknown.
#[derive(Clone, Debug, PartialEq)]
pub struct MonicRecurrence<T> {
    pub b: Vec<T>,
    pub u: Vec<T>,
    pub u_next: Option<T>,
    pub family: Family,
    pub params: FamilyParams<T>,
}

impl<T: Scalar> MonicRecurrence<T> {
    pub fn custom(b: Vec<T>, u: Vec<T>) -> Result<Self> {
        if b.is_empty() || u.len() + 1 != b.len() {
            return Err(Error::SizeMismatch(u.len() + 1, b.len()));
        }
        Ok(Self {
            b,
            u,
            u_next: None,
            family: Family::Custom,
            params: FamilyParams::Custom,
        })
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        self.b.is_empty()
    }

    /// `u_n`, with `u_0 = 0`.
    pub fn u_n(&self, n: usize) -> T {
        if n == 0 {
            T::zero()
        } else {
            self.u[n - 1].clone()
        }
    }

    pub fn to_f64(&self) -> MonicRecurrence<f64> {
        let c = |x: &T| x.to_f64_lossy();
        let params = match &self.params {
            FamilyParams::BigQJacobi(p) => FamilyParams::BigQJacobi(p.to_f64()),
            FamilyParams::AskeyWilson(p) => FamilyParams::AskeyWilson(AWParams::new(
                c(&p.q),
                c(&p.a1),
                c(&p.a2),
                c(&p.a3),
                c(&p.a4),
            )),
            FamilyParams::QHahn { q, c1, c2, n } => FamilyParams::QHahn {
                q: c(q),
                c1: c(c1),
                c2: c(c2),
                n: *n,
            },
            FamilyParams::QParaKrawtchouk { q, c3, n } => FamilyParams::QParaKrawtchouk {
                q: c(q),
                c3: c(c3),
                n: *n,
            },
            FamilyParams::Custom => FamilyParams::Custom,
        };
        MonicRecurrence {
            b: self.b.iter().map(c).collect(),
            u: self.u.iter().map(c).collect(),
            u_next: self.u_next.as_ref().map(c),
            family: self.family,
            params,
        }
    }
}

fn one_minus_ratio<T: Scalar>(num: &[T], den: &[T]) -> T {
    let f = |ts: &[T]| ts.iter().map(|t| (t.clone(), 1)).collect::<Vec<_>>();
    FactorRatio::new(f(num), f(den)).one_minus(&T::one())
}

fn product_one_minus<T: Scalar>(ts: &[T]) -> T {
    ts.iter()
        .fold(T::one(), |acc, t| acc * (T::one() - t.clone()))
}

fn abs_f64<T: Scalar>(x: &T) -> f64 {
    x.to_f64_lossy().abs()
}

/// Checks `1 − t ≠ 0` for a denominator factor.
fn check_factor<T: Scalar>(t: &T, what: &'static str, index: usize) -> Result<()> {
    if vanishes(&(T::one() - t.clone()), 1.0 + abs_f64(t)) {
        return Err(Error::Resonance { what, index });
    }
    Ok(())
}

fn pow<T: Scalar>(q: &T, k: i64) -> T {
    q.powi(k as i32)
}

/// `(D_n, 1 − D_n, C_n)` of the big q-Jacobi recurrence.
fn big_qj_dc<T: Scalar>(p: &StructuredParams<T>, n: usize) -> Result<(T, T, T)> {
    let q = &p.q;
    let n_i = n as i64;
    let c12 = p.c1.clone() * p.c2.clone();
    let d_num = [
        p.c1.clone() * pow(q, n_i + 1),
        c12.clone() * pow(q, n_i + 1),
        p.c3.clone() * pow(q, n_i + 1),
    ];
    let d_den = [c12.clone() * pow(q, 2 * n_i + 1), c12.clone() * pow(q, 2 * n_i + 2)];
    for t in &d_den {
        check_factor(t, "1 - c1 c2 q^k", n)?;
    }
    let d = product_one_minus(&d_num) / product_one_minus(&d_den);
    let one_minus_d = one_minus_ratio(&d_num, &d_den);
    let c = if n == 0 {
        T::zero()
    } else {
        let c_den = [c12.clone() * pow(q, 2 * n_i + 1), c12.clone() * pow(q, 2 * n_i)];
        for t in &c_den {
            check_factor(t, "1 - c1 c2 q^k", n)?;
        }
        let c_num = [
            pow(q, n_i),
            p.c2.clone() * pow(q, n_i),
            c12 / p.c3.clone() * pow(q, n_i),
        ];
        -(p.c1.clone() * p.c3.clone() * pow(q, n_i + 1)) * product_one_minus(&c_num)
            / product_one_minus(&c_den)
    };
    Ok((d, one_minus_d, c))
}

/// Big q-Jacobi coefficients `b_n = 1 − D_n − C_n`, `u_n = D_{n−1} C_n`,
/// for `n < count`.
pub fn big_q_jacobi<T: Scalar>(p: &StructuredParams<T>, count: usize) -> Result<MonicRecurrence<T>> {
    p.validate()?;
    if count == 0 {
        return Err(Error::TooSmall { size: 0, min: 1 });
    }
    let mut b = Vec::with_capacity(count);
    let mut d_prev = T::zero();
    let mut u = Vec::with_capacity(count);
    for n in 0..=count {
        let (d, one_minus_d, c) = big_qj_dc(p, n)?;
        if n > 0 {
            u.push(d_prev.clone() * c.clone());
        }
        if n < count {
            b.push(one_minus_d - c);
        }
        d_prev = d;
    }
    let u_next = u.pop();
    Ok(MonicRecurrence {
        b,
        u,
        u_next,
        family: Family::BigQJacobi,
        params: FamilyParams::BigQJacobi(p.clone()),
    })
}

/// Askey–Wilson coefficients `u_n = D_{n−1} C_n / 4`,
/// `b_n = (a1 + 1/a1 − D_n − C_n)/2`, for `n < count`.
pub fn askey_wilson<T: Scalar>(p: &AWParams<T>, count: usize) -> Result<MonicRecurrence<T>> {
    p.validate()?;
    if count == 0 {
        return Err(Error::TooSmall { size: 0, min: 1 });
    }
    let q = &p.q;
    let g = p.g();
    let two = T::from_int(2);
    let four = T::from_int(4);
    let resonance = |t: &T, n: usize| -> Result<()> {
        if vanishes(&(T::one() - t.clone()), 1.0 + abs_f64(t)) {
            return Err(Error::InvalidParameter(format!(
                "Askey-Wilson denominator 1 - g q^k vanishes at n = {n}"
            )));
        }
        Ok(())
    };

    let mut b = Vec::with_capacity(count);
    let mut u = Vec::with_capacity(count);
    let mut d_prev = T::zero();
    for n in 0..=count {
        let k = n as i64;
        // a1 D_n and C_n / a1 as ratios of (1 − t) factors
        let d_num = [
            p.a1.clone() * p.a2.clone() * pow(q, k),
            p.a1.clone() * p.a3.clone() * pow(q, k),
            p.a1.clone() * p.a4.clone() * pow(q, k),
            g.clone() * pow(q, k - 1),
        ];
        let d_den = [g.clone() * pow(q, 2 * k - 1), g.clone() * pow(q, 2 * k)];
        for t in &d_den {
            resonance(t, n)?;
        }
        let d = product_one_minus(&d_num) / product_one_minus(&d_den) / p.a1.clone();
        let inv_a1_minus_d = one_minus_ratio(&d_num, &d_den) / p.a1.clone();

        let (c, a1_minus_c) = if n == 0 {
            (T::zero(), p.a1.clone())
        } else {
            let c_num = [
                pow(q, k),
                p.a2.clone() * p.a3.clone() * pow(q, k - 1),
                p.a2.clone() * p.a4.clone() * pow(q, k - 1),
                p.a3.clone() * p.a4.clone() * pow(q, k - 1),
            ];
            let c_den = [g.clone() * pow(q, 2 * k - 1), g.clone() * pow(q, 2 * k - 2)];
            for t in &c_den {
                resonance(t, n)?;
            }
            (
                p.a1.clone() * product_one_minus(&c_num) / product_one_minus(&c_den),
                p.a1.clone() * one_minus_ratio(&c_num, &c_den),
            )
        };
        if n > 0 {
            u.push(d_prev.clone() * c / four.clone());
        }
        if n < count {
            b.push((a1_minus_c + inv_a1_minus_d) / two.clone());
        }
        d_prev = d;
    }
    let u_next = u.pop();
    Ok(MonicRecurrence {
        b,
        u,
        u_next,
        family: Family::AskeyWilson,
        params: FamilyParams::AskeyWilson(p.clone()),
    })
}

/// q-Hahn truncation `c3 = q^{−N−1}` of big q-Jacobi, size `N + 1`.
pub fn q_hahn<T: Scalar>(c1: &T, c2: &T, q: &T, n: usize) -> Result<MonicRecurrence<T>> {
    if n == 0 {
        return Err(Error::InvalidParameter("q-Hahn needs N >= 1".into()));
    }
    check_q(q, false)?;
    let c3 = q.powi(-(n as i32) - 1);
    let p = StructuredParams::new(q.clone(), c1.clone(), c2.clone(), c3);
    let mut rec = big_q_jacobi(&p, n + 1)?;
    rec.family = Family::QHahn;
    rec.params = FamilyParams::QHahn {
        q: q.clone(),
        c1: c1.clone(),
        c2: c2.clone(),
        n,
    };
    Ok(rec)
}

/// q-para Krawtchouk recurrence for odd `N`, size `N + 1`.
pub fn q_para_krawtchouk<T: Scalar>(c3: &T, q: &T, n: usize) -> Result<MonicRecurrence<T>> {
    if n % 2 == 0 {
        return Err(Error::InvalidParameter(format!(
            "q-para Krawtchouk needs odd N, got {n}"
        )));
    }
    check_q(q, false)?;
    if c3.is_zero() {
        return Err(Error::InvalidParameter("c3 must be nonzero".into()));
    }
    let big_n = n as i64;
    let half_lo = (big_n - 1) / 2;
    let half_hi = (big_n + 1) / 2;
    let resonance = |t: &T, idx: usize| -> Result<()> {
        if vanishes(&(T::one() - t.clone()), 1.0 + abs_f64(t)) {
            return Err(Error::InvalidParameter(format!(
                "q-para Krawtchouk denominator vanishes at n = {idx}"
            )));
        }
        Ok(())
    };

    let size = n + 1;
    let mut b = Vec::with_capacity(size);
    let mut u = Vec::with_capacity(size);
    let mut d_prev = T::zero();
    for idx in 0..=size {
        let k = idx as i64;
        let d_num = [pow(q, k - big_n), c3.clone() * pow(q, k + 1)];
        let d_den = [pow(q, 2 * k - big_n), -pow(q, k - half_lo)];
        for t in &d_den {
            resonance(t, idx)?;
        }
        let d = product_one_minus(&d_num) / product_one_minus(&d_den);
        let one_minus_d = one_minus_ratio(&d_num, &d_den);
        let c = if idx == 0 {
            T::zero()
        } else {
            let c_num = [pow(q, k), pow(q, k - big_n - 1) / c3.clone()];
            let c_den = [pow(q, 2 * k - big_n), -pow(q, k - half_hi)];
            for t in &c_den {
                resonance(t, idx)?;
            }
            -(c3.clone() * pow(q, k - half_lo)) * product_one_minus(&c_num)
                / product_one_minus(&c_den)
        };
        if idx > 0 {
            u.push(d_prev.clone() * c.clone());
        }
        if idx < size {
            b.push(one_minus_d - c);
        }
        d_prev = d;
    }
    let u_next = u.pop();
    Ok(MonicRecurrence {
        b,
        u,
        u_next,
        family: Family::QParaKrawtchouk,
        params: FamilyParams::QParaKrawtchouk {
            q: q.clone(),
            c3: c3.clone(),
            n,
        },
    })
}

/// `P_n(x)`; requires `n ≤ len(b)`.
pub fn eval_monic<T: Scalar>(rec: &MonicRecurrence<T>, n: usize, x: &T) -> Result<T> {
    if n > rec.len() {
        return Err(Error::OutOfRange(format!(
            "polynomial degree {n} exceeds recurrence length {}",
            rec.len()
        )));
    }
    let mut prev = T::zero();
    let mut cur = T::one();
    for k in 0..n {
        let next = (x.clone() - rec.b[k].clone()) * cur.clone() - rec.u_n(k) * prev;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Coefficients of `P_n` as a polynomial in `x`.
pub fn monic_polynomial<T: Scalar>(rec: &MonicRecurrence<T>, n: usize) -> Result<LaurentPoly<T>> {
    if n > rec.len() {
        return Err(Error::OutOfRange(format!(
            "polynomial degree {n} exceeds recurrence length {}",
            rec.len()
        )));
    }
    let x = LaurentPoly::monomial(T::one(), 1);
    let mut prev = LaurentPoly::zero();
    let mut cur = LaurentPoly::constant(T::one());
    for k in 0..n {
        let shifted = &x - &LaurentPoly::constant(rec.b[k].clone());
        let next = &(&shifted * &cur) - &prev.scale(&rec.u_n(k));
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// Jacobi matrix with subdiagonal 1, diagonal `b_n`, superdiagonal `u_{n+1}`.
pub fn jacobi_matrix<T: Scalar>(rec: &MonicRecurrence<T>) -> BandMatrix<T> {
    let n = rec.len();
    BandMatrix::tridiagonal(vec![T::one(); n - 1], rec.b.clone(), rec.u.clone())
        .expect("recurrence lengths are consistent")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LatticeKind {
    SingleExponential,
    BiExponential,
}

/// Claimed spectrum of a finite family.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumLattice<T> {
    pub points: Vec<T>,
    pub kind: LatticeKind,
}

/// `{q^{−s}}` for q-Hahn; `x_{2s} = q^{−s}`, `x_{2s+1} = c3 q^{s+1}` for
/// q-para Krawtchouk.
pub fn claimed_spectrum<T: Scalar>(rec: &MonicRecurrence<T>) -> Result<SpectrumLattice<T>> {
    match &rec.params {
        FamilyParams::QHahn { q, n, .. } => Ok(SpectrumLattice {
            points: (0..=*n as i32).map(|s| q.powi(-s)).collect(),
            kind: LatticeKind::SingleExponential,
        }),
        FamilyParams::QParaKrawtchouk { q, c3, n } => {
            let mut points = Vec::with_capacity(n + 1);
            for s in 0..=((*n as i32 - 1) / 2) {
                points.push(q.powi(-s));
                points.push(c3.clone() * q.powi(s + 1));
            }
            Ok(SpectrumLattice {
                points,
                kind: LatticeKind::BiExponential,
            })
        }
        _ => Err(Error::UnsupportedFamily(format!(
            "{:?} has no finite claimed spectrum",
            rec.family
        ))),
    }
}

/// Outcome of [`verify_spectrum`].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumCheck {
    /// `max_s |P_{N+1}(x_s)| / (Π_{t≠s} |x_s − x_t| · max(1, |x_s|))`.
    pub char_poly: ResidualReport,
    /// Largest relative distance between a lattice point and its eigenvalue.
    pub pairing: ResidualReport,
    pub eigenvalues: Vec<f64>,
    /// `pairs[s]` is the index into `eigenvalues` matched with lattice point `s`.
    pub pairs: Vec<usize>,
    pub pass: bool,
}

/// Checks that the lattice points are the roots of `P_{N+1}` and that the
/// computed eigenvalues of the Jacobi matrix pair off with them one to one.
pub fn verify_spectrum<T: Scalar>(
    rec: &MonicRecurrence<T>,
    lat: &SpectrumLattice<T>,
    pol: &TolerancePolicy,
) -> Result<SpectrumCheck> {
    let size = rec.len();
    if lat.points.len() != size {
        return Err(Error::SpectrumMismatch(format!(
            "lattice has {} points, matrix has size {size}",
            lat.points.len()
        )));
    }
    let jm = jacobi_matrix(rec);
    let pts: Vec<f64> = lat.points.iter().map(|x| x.to_f64_lossy()).collect();

    let mut worst = (0.0f64, 0usize);
    for (s, x) in lat.points.iter().enumerate() {
        let p = char_poly_eval(&jm, x)?.to_f64_lossy().abs();
        let gaps: f64 = pts
            .iter()
            .enumerate()
            .filter(|&(t, _)| t != s)
            .map(|(_, &y)| (pts[s] - y).abs())
            .product();
        let r = p / (gaps * pts[s].abs().max(1.0));
        if r > worst.0 || r.is_nan() {
            worst = (r, s);
        }
    }
    let char_poly = ResidualReport::from_value(worst.0, (worst.1, worst.1), 0..size, 1.0, pol);

    let eigs = eigenvalues(&jm, pol)?;
    let mut pairs = Vec::with_capacity(size);
    let mut taken = vec![false; size];
    let mut worst = (0.0f64, 0usize);
    for (s, &x) in pts.iter().enumerate() {
        let rel = |e: f64| (e - x).abs() / x.abs().max(f64::MIN_POSITIVE);
        let (j, d) = eigs
            .iter()
            .enumerate()
            .map(|(j, &e)| (j, rel(e)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty spectrum");
        if taken[j] {
            return Err(Error::SpectrumMismatch(format!(
                "eigenvalue {:.12e} is nearest to two lattice points",
                eigs[j]
            )));
        }
        taken[j] = true;
        pairs.push(j);
        if d > worst.0 || d.is_nan() {
            worst = (d, s);
        }
    }
    let pairing =
        ResidualReport::from_value(worst.0, (worst.1, pairs[worst.1]), 0..size, 1.0, pol);
    let pass = char_poly.pass && pairing.pass;
    Ok(SpectrumCheck {
        char_poly,
        pairing,
        eigenvalues: eigs,
        pairs,
        pass,
    })
}
