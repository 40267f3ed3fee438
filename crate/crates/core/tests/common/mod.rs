#![allow(dead_code)]

use num_rational::BigRational;
use num_traits::{One, Zero};
use qosc::families::AWParams;
use qosc::numerics::ratio;
use qosc::opmatrix::BandMatrix;
use qosc::representation::{GeneralParams, StructuredParams};
use qosc::Scalar;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;

pub fn r(n: i64, d: i64) -> Q {
    ratio(n, d)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

// ---- dense oracle ----

pub fn dense<T: Scalar>(m: &BandMatrix<T>) -> Vec<Vec<T>> {
    let n = m.size();
    (0..n).map(|i| (0..n).map(|j| m.get(i, j)).collect()).collect()
}

pub fn dense_mul<T: Scalar>(a: &[Vec<T>], b: &[Vec<T>]) -> Vec<Vec<T>> {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(T::zero(), |acc, k| acc + a[i][k].clone() * b[k][j].clone()))
                .collect()
        })
        .collect()
}

pub fn dense_lincomb<T: Scalar>(terms: &[(T, &Vec<Vec<T>>)]) -> Vec<Vec<T>> {
    let n = terms[0].1.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    terms
                        .iter()
                        .fold(T::zero(), |acc, (c, m)| acc + c.clone() * m[i][j].clone())
                })
                .collect()
        })
        .collect()
}

pub fn dense_identity<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { T::one() } else { T::zero() }).collect())
        .collect()
}

/// `XY − qYX` by dense products.
pub fn dense_qcomm<T: Scalar>(x: &[Vec<T>], y: &[Vec<T>], q: &T) -> Vec<Vec<T>> {
    let xy = dense_mul(x, y);
    let yx = dense_mul(y, x);
    dense_lincomb(&[(T::one(), &xy), (-q.clone(), &yx)])
}

pub fn max_abs_rows<T: Scalar>(m: &[Vec<T>], rows: std::ops::Range<usize>) -> f64 {
    rows.flat_map(|i| m[i].iter().map(|v| v.to_f64_lossy().abs()))
        .fold(0.0, f64::max)
}

pub fn rows_zero(m: &[Vec<Q>], rows: std::ops::Range<usize>) -> bool {
    rows.into_iter().all(|i| m[i].iter().all(Zero::is_zero))
}

// ---- polynomials in x, ascending coefficients ----

pub fn poly_mul(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add_scaled(acc: &mut Vec<Q>, p: &[Q], c: &Q) {
    if acc.len() < p.len() {
        acc.resize(p.len(), Q::zero());
    }
    for (a, x) in acc.iter_mut().zip(p) {
        *a += c * x;
    }
}

pub fn monic(mut p: Vec<Q>) -> Vec<Q> {
    while p.len() > 1 && p.last().unwrap().is_zero() {
        p.pop();
    }
    let lead = p.last().unwrap().clone();
    p.into_iter().map(|c| c / &lead).collect()
}

/// `(a; q)_k`.
pub fn qpoch(a: &Q, q: &Q, k: usize) -> Q {
    (0..k).fold(Q::one(), |acc, j| acc * (Q::one() - a * q.powi(j as i32)))
}

/// `(x; q)_k` as a polynomial in `x`.
pub fn qpoch_x(q: &Q, k: usize) -> Vec<Q> {
    (0..k).fold(vec![Q::one()], |acc, j| {
        poly_mul(&acc, &[Q::one(), -q.powi(j as i32)])
    })
}

/// `(a z; q)_k (a/z; q)_k` in `x = (z + 1/z)/2`: `Π (1 − 2 a qʲ x + a² q²ʲ)`.
pub fn aw_factor_x(a: &Q, q: &Q, k: usize) -> Vec<Q> {
    (0..k).fold(vec![Q::one()], |acc, j| {
        let aq = a * q.powi(j as i32);
        poly_mul(&acc, &[Q::one() + &aq * &aq, -(r(2, 1) * &aq)])
    })
}

/// Monic `₃φ₂(q^{−n}, c1 c2 q^{n+1}, x; c1 q, c3 q; q, q)`.
pub fn big_qj_hypergeometric(c1: &Q, c2: &Q, c3: &Q, q: &Q, n: usize) -> Vec<Q> {
    let mut acc = vec![Q::zero()];
    for k in 0..=n {
        let c = qpoch(&q.powi(-(n as i32)), q, k) * qpoch(&(c1 * c2 * q.powi(n as i32 + 1)), q, k)
            / (qpoch(&(c1 * q), q, k) * qpoch(&(c3 * q), q, k) * qpoch(q, q, k))
            * q.powi(k as i32);
        poly_add_scaled(&mut acc, &qpoch_x(q, k), &c);
    }
    monic(acc)
}

/// Monic `₄φ₃(q^{−n}, g q^{n−1}, a1 z, a1/z; a1 a2, a1 a3, a1 a4; q, q)`.
pub fn aw_hypergeometric(p: &AWParams<Q>, n: usize) -> Vec<Q> {
    let q = &p.q;
    let g = p.g();
    let mut acc = vec![Q::zero()];
    for k in 0..=n {
        let c = qpoch(&q.powi(-(n as i32)), q, k) * qpoch(&(&g * q.powi(n as i32 - 1)), q, k)
            / (qpoch(&(&p.a1 * &p.a2), q, k)
                * qpoch(&(&p.a1 * &p.a3), q, k)
                * qpoch(&(&p.a1 * &p.a4), q, k)
                * qpoch(q, q, k))
            * q.powi(k as i32);
        poly_add_scaled(&mut acc, &aw_factor_x(&p.a1, q, k), &c);
    }
    monic(acc)
}

// ---- rational fixtures ----

pub fn general_fixtures() -> Vec<GeneralParams<Q>> {
    vec![
        GeneralParams::new(r(1, 2), r(1, 1), r(1, 5), r(1, 10), r(3, 10)),
        GeneralParams::new(r(7, 10), r(1, 1), r(1, 5), r(1, 10), r(3, 10)),
        GeneralParams::new(r(2, 3), r(-3, 2), r(1, 4), r(-1, 2), r(1, 3)),
        GeneralParams::new(r(9, 10), r(1, 3), r(-5, 4), r(0, 1), r(-7, 8)),
        GeneralParams::new(r(3, 5), r(2, 1), r(3, 7), r(1, 1), r(1, 1)),
    ]
}

pub fn structured_fixtures() -> Vec<StructuredParams<Q>> {
    vec![
        StructuredParams::new(r(1, 2), r(1, 4), r(1, 2), r(1, 4)),
        StructuredParams::new(r(7, 10), r(3, 10), r(2, 5), r(1, 5)),
        StructuredParams::new(r(3, 5), r(1, 3), r(3, 4), r(2, 7)),
        StructuredParams::new(r(2, 3), r(-1, 2), r(5, 3), r(-3, 4)),
    ]
}

// ---- seeded draws ----

fn signed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    let m = rng.gen_range(lo..hi);
    if rng.gen_bool(0.5) {
        m
    } else {
        -m
    }
}

/// Smallest `|1 − t|` relative to `1 + |t|` over the factors a draw divides by.
pub fn margin(factors: impl IntoIterator<Item = f64>) -> f64 {
    factors
        .into_iter()
        .map(|t| (1.0 - t).abs() / (1.0 + t.abs()))
        .fold(f64::INFINITY, f64::min)
}

/// Draws whose structural denominators come closer than this to vanishing
/// are redrawn.
pub const MARGIN: f64 = 1e-3;

/// `q ∈ (0.3, 0.95)`, `|ξ0|, |ζ0| ∈ (0.1, 2)`, `|s1|, |s2| ≤ 1`, with
/// `γ_n`, `y_n` (the factors `1 − (ζ0/ξ0) q^{2n}`, `1 − (ζ0/ξ0) q^{2n+1}`)
/// bounded away from zero over `n ≤ size`.
pub fn general_draw(rng: &mut ChaCha8Rng, size: usize) -> GeneralParams<f64> {
    loop {
        let q = rng.gen_range(0.3..0.95);
        let xi0 = signed(rng, 0.1, 2.0);
        let zeta0 = signed(rng, 0.1, 2.0);
        let s1 = rng.gen_range(-1.0..1.0);
        let s2 = rng.gen_range(-1.0..1.0);
        let tau = zeta0 / xi0;
        let m = margin((0..=2 * size as i32 + 2).map(|k| tau * f64::powi(q, k)));
        if m > MARGIN {
            return GeneralParams::new(q, xi0, zeta0, s1, s2);
        }
    }
}

/// `q ∈ (0.3, 0.95)`, `|c_i| ∈ (0.1, 2)`, resonance-free for the big
/// q-Jacobi denominators over `n ≤ size`.
pub fn structured_draw(rng: &mut ChaCha8Rng, size: usize) -> StructuredParams<f64> {
    loop {
        let q: f64 = rng.gen_range(0.3..0.95);
        let c1 = signed(rng, 0.1, 2.0);
        let c2 = signed(rng, 0.1, 2.0);
        let c3 = signed(rng, 0.1, 2.0);
        let c12 = c1 * c2;
        let m = margin((0..=2 * size as i32 + 2).map(|k| c12 * q.powi(k)));
        if m > MARGIN {
            return StructuredParams::new(q, c1, c2, c3);
        }
    }
}

/// `q ∈ (0.3, 0.95)`, `a_i ∈ (−0.9, 0.9) \ {0}` (kept at least 1e-3 from
/// zero), with `g q^k` away from 1.
pub fn aw_draw(rng: &mut ChaCha8Rng, count: usize) -> AWParams<f64> {
    loop {
        let q: f64 = rng.gen_range(0.3..0.95);
        let a = [
            signed(rng, 1e-3, 0.9),
            signed(rng, 1e-3, 0.9),
            signed(rng, 1e-3, 0.9),
            signed(rng, 1e-3, 0.9),
        ];
        let g = a.iter().product::<f64>();
        let m = margin((-2..=2 * count as i32 + 2).map(|k| g * q.powi(k)));
        if m > MARGIN {
            return AWParams::new(q, a[0], a[1], a[2], a[3]);
        }
    }
}

/// Largest entry of `A B − q B A − I` in units of the ulp of the largest
/// term that forms the entry.
pub fn qcomm_defect_in_ulps(a: &BandMatrix<f64>, b: &BandMatrix<f64>, q: f64) -> f64 {
    let n = a.size();
    let (da, db) = (dense(a), dense(b));
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let mut v = if i == j { -1.0 } else { 0.0 };
            let mut big = if i == j { 1.0f64 } else { 0.0 };
            for k in 0..n {
                let (x, y) = (da[i][k] * db[k][j], q * (db[i][k] * da[k][j]));
                v += x - y;
                big = big.max(x.abs()).max(y.abs());
            }
            if big > 0.0 {
                worst = worst.max(v.abs() / qosc::numerics::ulp(big));
            }
        }
    }
    worst
}
