use serde::Serialize;

use crate::numerics::{check_q, vanishes, Scalar, TolerancePolicy};
use crate::opmatrix::{overflow_guard, BandMatrix, ResidualReport};
use crate::{Error, Result};

/// Parameters `(q, ξ0, ζ0, s1, s2)` of the general tridiagonal solution.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralParams<T> {
    pub q: T,
    pub xi0: T,
    pub zeta0: T,
    pub s1: T,
    pub s2: T,
}

impl<T: Scalar> GeneralParams<T> {
    pub fn new(q: T, xi0: T, zeta0: T, s1: T, s2: T) -> Self {
        Self {
            q,
            xi0,
            zeta0,
            s1,
            s2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_q(&self.q, false)?;
        if self.xi0.is_zero() || self.zeta0.is_zero() {
            return Err(Error::InvalidParameter(
                "xi0 and zeta0 must be nonzero".into(),
            ));
        }
        Ok(())
    }

    /// `τ = ζ0 / ξ0`.
    pub fn tau(&self) -> T {
        self.zeta0.clone() / self.xi0.clone()
    }

    pub fn to_f64(&self) -> GeneralParams<f64> {
        GeneralParams::new(
            self.q.to_f64_lossy(),
            self.xi0.to_f64_lossy(),
            self.zeta0.to_f64_lossy(),
            self.s1.to_f64_lossy(),
            self.s2.to_f64_lossy(),
        )
    }
}

/// Every intermediate sequence of the construction, indexed from `n = 0`.
///
/// `gamma` has one extra entry (`γ_size`); `u[0] = 0` and `v[0]` is the
/// computed `V_0`, which `s0` makes vanish.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GeneralSolutionTrace<T> {
    pub xi: Vec<T>,
    pub zeta: Vec<T>,
    pub z: Vec<T>,
    pub gamma: Vec<T>,
    pub y: Vec<T>,
    #[serde(rename = "K")]
    pub k: Vec<T>,
    pub s0: T,
    pub b: Vec<T>,
    pub eta: Vec<T>,
    pub u: Vec<T>,
    #[serde(rename = "V")]
    pub v: Vec<T>,
}

/// `(s1, s2)` from the initial values `b0, η0`:
/// `s1 = (ξ0/q + ζ0) b0 − (1 + 1/q) η0`, `s2 = (ξ0/q + ζ0) η0 − ξ0 ζ0 (1 + 1/q) b0`.
pub fn s_from_initial<T: Scalar>(q: &T, xi0: &T, zeta0: &T, b0: &T, eta0: &T) -> (T, T) {
    let w = xi0.clone() / q.clone() + zeta0.clone();
    let v = T::one() + q.recip();
    let s1 = w.clone() * b0.clone() - v.clone() * eta0.clone();
    let s2 = w * eta0.clone() - xi0.clone() * zeta0.clone() * v * b0.clone();
    (s1, s2)
}

/// Inverse of [`s_from_initial`]: solves the 2×2 system for `(b0, η0)`.
/// The determinant is `γ0 γ1 / q`.
pub fn initial_from_s<T: Scalar>(p: &GeneralParams<T>) -> Result<(T, T)> {
    let q = &p.q;
    let w = p.xi0.clone() / q.clone() + p.zeta0.clone();
    let v = T::one() + q.recip();
    let det = w.clone() * w.clone() - p.xi0.clone() * p.zeta0.clone() * v.clone() * v.clone();
    if det.is_zero() {
        return Err(Error::Resonance {
            what: "gamma_0 gamma_1",
            index: 0,
        });
    }
    let b0 = (w.clone() * p.s1.clone() + v.clone() * p.s2.clone()) / det.clone();
    let eta0 = (w * p.s2.clone() + p.xi0.clone() * p.zeta0.clone() * v * p.s1.clone()) / det;
    Ok((b0, eta0))
}

fn abs<T: Scalar>(x: &T) -> f64 {
    x.to_f64_lossy().abs()
}

/// The general pair: `A` monic with diagonal `b_n`, superdiagonal `u_{n+1}`;
/// `B` with subdiagonal `ξ_{n+1}`, diagonal `η_n`, superdiagonal `ζ_{n+1} u_{n+1}`.
pub fn build_general<T: Scalar>(
    p: &GeneralParams<T>,
    size: usize,
) -> Result<(BandMatrix<T>, BandMatrix<T>, GeneralSolutionTrace<T>)> {
    p.validate()?;
    if size < 3 {
        return Err(Error::TooSmall { size, min: 3 });
    }
    overflow_guard(&p.q, size)?;

    let one = T::one();
    let q = p.q.clone();
    let (xi0, zeta0, s1, s2) = (&p.xi0, &p.zeta0, &p.s1, &p.s2);
    let qp = |k: i64| q.powi(k as i32);

    let xi: Vec<T> = (0..size).map(|n| xi0.clone() * qp(-(n as i64))).collect();
    let zeta: Vec<T> = (0..size).map(|n| zeta0.clone() * qp(n as i64)).collect();
    let z: Vec<T> = (0..=size)
        .map(|n| xi0.clone() * qp(-(n as i64)) + zeta0.clone() * qp(n as i64 + 1))
        .collect();

    let mut gamma = Vec::with_capacity(size + 1);
    for n in 0..=size {
        let (l, r) = (xi0.clone() * qp(-(n as i64)), zeta0.clone() * qp(n as i64));
        let g = l.clone() - r.clone();
        if vanishes(&g, abs(&l) + abs(&r)) {
            return Err(Error::Resonance {
                what: "gamma_n",
                index: n,
            });
        }
        gamma.push(g);
    }
    let mut y = Vec::with_capacity(size);
    for n in 0..size {
        let (l, r) = (xi0.clone() * qp(-(n as i64)), zeta0.clone() * qp(n as i64 + 1));
        let v = l.clone() - r.clone();
        if vanishes(&v, abs(&l) + abs(&r)) {
            return Err(Error::Resonance {
                what: "y_n",
                index: n,
            });
        }
        y.push(v);
    }

    let qq1 = q.clone() + one.clone();
    let mut b = Vec::with_capacity(size);
    let mut eta = Vec::with_capacity(size);
    for n in 0..size {
        let den = gamma[n].clone() * gamma[n + 1].clone();
        b.push((s2.clone() * qq1.clone() + s1.clone() * z[n].clone()) / den.clone());
        eta.push(
            (s1.clone() * xi0.clone() * zeta0.clone() * qq1.clone() + s2.clone() * z[n].clone())
                / den,
        );
    }

    let k: Vec<T> = (0..size)
        .map(|n| {
            let n = n as i64;
            qp(2 - n)
                * (s2.clone() + s1.clone() * zeta0.clone() * qp(n))
                * (s2.clone() * qp(n) + s1.clone() * xi0.clone())
                / (gamma[n as usize].clone() * gamma[n as usize].clone())
        })
        .collect();

    let dxz = xi0.clone() - zeta0.clone();
    let dxz2 = dxz.clone() * dxz;
    let s0 = q.clone()
        * ((xi0.clone() + zeta0.clone()) * dxz2.clone()
            + q.clone()
                * (one.clone() - q.clone())
                * (xi0.clone() * zeta0.clone() * s1.clone() * s1.clone()
                    + (xi0.clone() + zeta0.clone()) * s1.clone() * s2.clone()
                    + s2.clone() * s2.clone()))
        / ((q.clone() - one.clone()) * dxz2);

    let inv_q_minus_1 = q.recip() - one.clone();
    let mut v = Vec::with_capacity(size);
    let mut u = Vec::with_capacity(size);
    for n in 0..size {
        let lead = (xi0.clone() * qp(-(n as i64)) + zeta0.clone() * qp(n as i64))
            / inv_q_minus_1.clone();
        let vn = lead.clone() + k[n].clone() + s0.clone();
        if n == 0 {
            u.push(T::zero());
        } else {
            if vanishes(&vn, abs(&lead) + abs(&k[n]) + abs(&s0)) {
                return Err(Error::Reducible { index: n });
            }
            u.push(vn.clone() / (y[n].clone() * y[n - 1].clone()));
        }
        v.push(vn);
    }

    let a = BandMatrix::tridiagonal(vec![one; size - 1], b.clone(), u[1..].to_vec())?;
    let bm = BandMatrix::tridiagonal(
        xi[1..].to_vec(),
        eta.clone(),
        (1..size).map(|n| zeta[n].clone() * u[n].clone()).collect(),
    )?;
    let trace = GeneralSolutionTrace {
        xi,
        zeta,
        z,
        gamma,
        y,
        k,
        s0,
        b,
        eta,
        u,
        v,
    };
    Ok((a, bm, trace))
}

/// Residual sequence `Ξ_n` for `n = start, start+1, …`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiSequence<T> {
    pub start: usize,
    pub values: Vec<T>,
}

impl<T: Scalar> XiSequence<T> {
    pub fn max_abs(&self) -> (f64, usize) {
        self.values
            .iter()
            .enumerate()
            .map(|(i, v)| (abs(v), self.start + i))
            .fold((0.0, self.start), |acc, x| if x.0 > acc.0 || x.0.is_nan() { x } else { acc })
    }
}

/// The five consistency sequences of `AB − qBA = I`:
///
/// * `Ξ⁽¹⁾_n = ξ_{n−1} − q ξ_n`, `n ≥ 2`
/// * `Ξ⁽²⁾_n = ξ_n (b_n − q b_{n−1}) + η_{n−1} − q η_n`, `n ≥ 1`
/// * `Ξ⁽³⁾_n = ζ_n u_n − q ζ_{n+1} u_{n+1} + ξ_{n+1} u_{n+1} − q ξ_n u_n + (1−q) b_n η_n − 1`, `n ≥ 0`, `u_0 = 0`
/// * `Ξ⁽⁴⁾_n = ζ_n (b_{n−1} − q b_n) + η_n − q η_{n−1}`, `n ≥ 1`
/// * `Ξ⁽⁵⁾_n = ζ_n − q ζ_{n−1}`, `n ≥ 2`
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct XiResiduals<T> {
    pub xi1: XiSequence<T>,
    pub xi2: XiSequence<T>,
    pub xi3: XiSequence<T>,
    pub xi4: XiSequence<T>,
    pub xi5: XiSequence<T>,
}

impl<T: Scalar> XiResiduals<T> {
    pub fn sequences(&self) -> [&XiSequence<T>; 5] {
        [&self.xi1, &self.xi2, &self.xi3, &self.xi4, &self.xi5]
    }

    /// One report per sequence; the location is `(k, n)` for `Ξ⁽ᵏ⁾_n`.
    pub fn reports(&self, scale: f64, pol: &TolerancePolicy) -> [ResidualReport; 5] {
        let mut k = 0;
        self.sequences().map(|s| {
            k += 1;
            let (m, n) = s.max_abs();
            ResidualReport::from_value(m, (k, n), s.start..s.start + s.values.len(), scale, pol)
        })
    }
}

pub(crate) fn require_monic<T: Scalar>(a: &BandMatrix<T>) -> Result<()> {
    if !a.is_tridiagonal() {
        return Err(Error::InvalidNormalization("A is not tridiagonal".into()));
    }
    for n in 1..a.size() {
        let d = a.get(n, n - 1) - T::one();
        if !d.is_negligible(1e-12) {
            return Err(Error::InvalidNormalization(format!(
                "A subdiagonal entry ({n}, {}) is {:?}, not 1",
                n - 1,
                a.get(n, n - 1)
            )));
        }
    }
    Ok(())
}

/// Evaluates `Ξ⁽¹⁾…Ξ⁽⁵⁾` from the entries of a monic `A` and a tridiagonal `B`.
pub fn xi_residuals<T: Scalar>(
    a: &BandMatrix<T>,
    b: &BandMatrix<T>,
    q: &T,
) -> Result<XiResiduals<T>> {
    let size = a.size();
    if b.size() != size {
        return Err(Error::SizeMismatch(b.size(), size));
    }
    if !b.is_tridiagonal() {
        return Err(Error::InvalidParameter("B is not tridiagonal".into()));
    }
    require_monic(a)?;
    let one = T::one();
    let bb = |n: usize| a.get(n, n);
    let u = |n: usize| if n == 0 { T::zero() } else { a.get(n - 1, n) };
    let xi = |n: usize| b.get(n, n - 1);
    let eta = |n: usize| b.get(n, n);
    // ζ_n u_n is the superdiagonal entry of B itself
    let zu = |n: usize| if n == 0 { T::zero() } else { b.get(n - 1, n) };
    let mut zeta = vec![T::zero(); size];
    for n in 1..size {
        if u(n).is_zero() {
            return Err(Error::Reducible { index: n });
        }
        zeta[n] = zu(n) / u(n);
    }

    let xi1 = (2..size).map(|n| xi(n - 1) - q.clone() * xi(n)).collect();
    let xi2 = (1..size)
        .map(|n| {
            xi(n) * (bb(n) - q.clone() * bb(n - 1)) + eta(n - 1) - q.clone() * eta(n)
        })
        .collect();
    let xi3 = (0..size - 1)
        .map(|n| {
            let xi_u = if n == 0 { T::zero() } else { xi(n) * u(n) };
            zu(n) - q.clone() * zu(n + 1) + xi(n + 1) * u(n + 1) - q.clone() * xi_u
                + (one.clone() - q.clone()) * bb(n) * eta(n)
                - one.clone()
        })
        .collect();
    let xi4 = (1..size)
        .map(|n| {
            zeta[n].clone() * (bb(n - 1) - q.clone() * bb(n)) + eta(n) - q.clone() * eta(n - 1)
        })
        .collect();
    let xi5 = (2..size)
        .map(|n| zeta[n].clone() - q.clone() * zeta[n - 1].clone())
        .collect();
    Ok(XiResiduals {
        xi1: XiSequence { start: 2, values: xi1 },
        xi2: XiSequence { start: 1, values: xi2 },
        xi3: XiSequence { start: 0, values: xi3 },
        xi4: XiSequence { start: 1, values: xi4 },
        xi5: XiSequence { start: 2, values: xi5 },
    })
}

/// Recovered parameters plus the entrywise fit of the rebuilt pair.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Classification<T> {
    pub params: GeneralParams<T>,
    pub fit: ResidualReport,
}

/// Largest entry deviation `|x − y| / max(|y|, ‖row_i(y)‖₁)` over the band.
pub(crate) fn row_relative_deviation<T: Scalar>(
    got: &BandMatrix<T>,
    want: &BandMatrix<T>,
) -> (f64, (usize, usize)) {
    let g = got.to_f64();
    let w = want.to_f64();
    let n = w.size();
    let lo = g.lower().max(w.lower());
    let hi = g.upper().max(w.upper());
    let mut worst = (0.0f64, (0, 0));
    for i in 0..n {
        let row: f64 = (i.saturating_sub(w.lower())..(i + w.upper() + 1).min(n))
            .map(|j| w.get(i, j).abs())
            .sum();
        for j in i.saturating_sub(lo)..(i + hi + 1).min(n) {
            let (x, y) = (g.get(i, j), w.get(i, j));
            let denom = y.abs().max(row);
            let dev = if denom == 0.0 { (x - y).abs() } else { (x - y).abs() / denom };
            if dev > worst.0 || dev.is_nan() {
                worst = (dev, (i, j));
            }
        }
    }
    worst
}

/// Reads `ξ0 = q ξ1`, `ζ0 = ζ1 / q`, `s1`, `s2` (from `b0`, `η0`) off the
/// pair, validates the geometric laws of `ξ_n`, `ζ_n`, and compares every
/// entry against the pair rebuilt from the recovered parameters.
pub fn classify<T: Scalar>(
    a: &BandMatrix<T>,
    b: &BandMatrix<T>,
    q: &T,
    pol: &TolerancePolicy,
) -> Result<Classification<T>> {
    let size = a.size();
    if b.size() != size {
        return Err(Error::SizeMismatch(b.size(), size));
    }
    if size < 3 {
        return Err(Error::TooSmall { size, min: 3 });
    }
    if !b.is_tridiagonal() {
        return Err(Error::InvalidParameter("B is not tridiagonal".into()));
    }
    require_monic(a)?;
    check_q(q, false)?;
    let u1 = a.get(0, 1);
    if u1.is_zero() {
        return Err(Error::Reducible { index: 1 });
    }
    let xi0 = q.clone() * b.get(1, 0);
    let zeta0 = b.get(0, 1) / u1 / q.clone();

    let tol = pol.rel_tol.max(pol.abs_tol);
    let law = |name: &str, n: usize, got: T, want: T| -> Result<()> {
        let (g, w) = (got.to_f64_lossy(), want.to_f64_lossy());
        let dev = (g - w).abs() / w.abs().max(f64::MIN_POSITIVE);
        let off = if T::EXACT { got != want } else { !(dev <= tol) };
        if off {
            return Err(Error::NotQOscillator(format!(
                "{name}_{n} = {g:.16e} breaks the geometric law (expected {w:.16e}, relative deviation {dev:.3e})"
            )));
        }
        Ok(())
    };
    for n in 1..size {
        let qn = q.powi(n as i32);
        law("xi", n, b.get(n, n - 1), xi0.clone() / qn.clone())?;
        let un = a.get(n - 1, n);
        if un.is_zero() {
            return Err(Error::Reducible { index: n });
        }
        law("zeta", n, b.get(n - 1, n) / un, zeta0.clone() * qn)?;
    }

    let (s1, s2) = s_from_initial(q, &xi0, &zeta0, &a.get(0, 0), &b.get(0, 0));
    let params = GeneralParams::new(q.clone(), xi0, zeta0, s1, s2);
    let (ra, rb, _) = build_general(&params, size)?;
    let (da, la) = row_relative_deviation(a, &ra);
    let (db, lb) = row_relative_deviation(b, &rb);
    let (m, loc) = if db > da || db.is_nan() { (db, lb) } else { (da, la) };
    Ok(Classification {
        params,
        fit: ResidualReport::from_value(m, loc, 0..size, 1.0, pol),
    })
}
