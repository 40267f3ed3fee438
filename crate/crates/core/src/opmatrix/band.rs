use crate::numerics::Scalar;
use crate::{Error, Result};

/// Square banded matrix: a finite truncation of a semi-infinite banded
/// operator.
///
/// Band `k ∈ [-lower, upper]` holds the `size - |k|` entries `(i, i + k)`,
/// indexed by `min(i, i + k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandMatrix<T> {
    size: usize,
    lower: usize,
    upper: usize,
    bands: Vec<Vec<T>>,
}

impl<T: Scalar> BandMatrix<T> {
    pub fn zeros(size: usize, lower: usize, upper: usize) -> Self {
        let bands = (0..=lower + upper)
            .map(|b| {
                let k = b as isize - lower as isize;
                vec![T::zero(); size.saturating_sub(k.unsigned_abs())]
            })
            .collect();
        Self {
            size,
            lower,
            upper,
            bands,
        }
    }

    pub fn identity(size: usize) -> Self {
        Self::diagonal(vec![T::one(); size])
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        Self {
            size: d.len(),
            lower: 0,
            upper: 0,
            bands: vec![d],
        }
    }

    /// Tridiagonal matrix from its three bands (`sub[i]` is entry `(i+1, i)`,
    /// `sup[i]` is entry `(i, i+1)`).
    pub fn tridiagonal(sub: Vec<T>, diag: Vec<T>, sup: Vec<T>) -> Result<Self> {
        let n = diag.len();
        let off = n.saturating_sub(1);
        if sub.len() != off || sup.len() != off {
            return Err(Error::InvalidParameter(format!(
                "tridiagonal bands of length {}/{} for size {n}",
                sub.len(),
                sup.len()
            )));
        }
        Ok(Self {
            size: n,
            lower: 1,
            upper: 1,
            bands: vec![sub, diag, sup],
        })
    }

    pub fn from_dense(rows: &[Vec<T>], lower: usize, upper: usize) -> Result<Self> {
        let n = rows.len();
        let mut m = Self::zeros(n, lower, upper);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::SizeMismatch(row.len(), n));
            }
            for (j, v) in row.iter().enumerate() {
                if m.in_band(i, j) {
                    m.set(i, j, v.clone());
                } else if !v.is_zero() {
                    return Err(Error::InvalidParameter(format!(
                        "entry ({i}, {j}) lies outside bands [-{lower}, {upper}]"
                    )));
                }
            }
        }
        Ok(m)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn lower(&self) -> usize {
        self.lower
    }

    pub fn upper(&self) -> usize {
        self.upper
    }

    pub fn is_tridiagonal(&self) -> bool {
        self.lower <= 1 && self.upper <= 1
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.size && j < self.size && i <= j + self.lower && j <= i + self.upper
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        if !self.in_band(i, j) {
            return T::zero();
        }
        let b = j + self.lower - i;
        self.bands[b][i.min(j)].clone()
    }

    /// Panics outside the band structure.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(self.in_band(i, j), "({i}, {j}) outside band structure");
        let b = j + self.lower - i;
        self.bands[b][i.min(j)] = v;
    }

    /// Entries of band `k` (0 = diagonal, 1 = superdiagonal, -1 = subdiagonal).
    pub fn band(&self, k: isize) -> Option<&[T]> {
        if k < -(self.lower as isize) || k > self.upper as isize {
            return None;
        }
        Some(&self.bands[(k + self.lower as isize) as usize])
    }

    pub fn diag(&self) -> &[T] {
        &self.bands[self.lower]
    }

    /// Copy with bands widened to at least `[-lower, upper]`.
    pub fn widened(&self, lower: usize, upper: usize) -> Self {
        if lower <= self.lower && upper <= self.upper {
            return self.clone();
        }
        let mut out = Self::zeros(self.size, lower.max(self.lower), upper.max(self.upper));
        for (i, j, v) in self.entries() {
            out.set(i, j, v.clone());
        }
        out
    }

    /// `(row, col, value)` for every stored entry.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &T)> {
        let lower = self.lower as isize;
        self.bands.iter().enumerate().flat_map(move |(b, band)| {
            let k = b as isize - lower;
            band.iter().enumerate().map(move |(t, v)| {
                if k >= 0 {
                    (t, t + k as usize, v)
                } else {
                    (t + (-k) as usize, t, v)
                }
            })
        })
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> BandMatrix<U> {
        BandMatrix {
            size: self.size,
            lower: self.lower,
            upper: self.upper,
            bands: self
                .bands
                .iter()
                .map(|band| band.iter().map(&f).collect())
                .collect(),
        }
    }

    pub fn to_f64(&self) -> BandMatrix<f64> {
        self.map(|v| v.to_f64_lossy())
    }

    pub fn to_dense(&self) -> Vec<Vec<T>> {
        (0..self.size)
            .map(|i| (0..self.size).map(|j| self.get(i, j)).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        let mut bands = self.bands.clone();
        bands.reverse();
        Self {
            size: self.size,
            lower: self.upper,
            upper: self.lower,
            bands,
        }
    }

    pub fn scale(&self, c: &T) -> Self {
        self.map(|v| v.clone() * c.clone())
    }

    /// `Σ c_i M_i`; the result carries the widest band structure of the terms.
    pub fn lincomb(terms: &[(T, &BandMatrix<T>)]) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("empty linear combination".into()))?;
        let size = first.1.size;
        let lower = terms.iter().map(|(_, m)| m.lower).max().unwrap_or(0);
        let upper = terms.iter().map(|(_, m)| m.upper).max().unwrap_or(0);
        let mut out = Self::zeros(size, lower, upper);
        for (c, m) in terms {
            if m.size != size {
                return Err(Error::SizeMismatch(m.size, size));
            }
            for (i, j, v) in m.entries() {
                let cur = out.get(i, j);
                out.set(i, j, cur + c.clone() * v.clone());
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        Self::lincomb(&[(T::one(), self), (T::one(), other)])
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        Self::lincomb(&[(T::one(), self), (-T::one(), other)])
    }

    /// `self + c·I`.
    pub fn add_identity(&self, c: &T) -> Self {
        let mut out = self.clone();
        for i in 0..self.size {
            let cur = out.get(i, i);
            out.set(i, i, cur + c.clone());
        }
        out
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        let mut rows = vec![0.0f64; self.size];
        for (i, _, v) in self.entries() {
            rows[i] += v.to_f64_lossy().abs();
        }
        rows.into_iter().fold(0.0, f64::max)
    }

    /// Largest |entry| over rows in `rows`, with its location.
    pub fn max_abs_in_rows(&self, rows: std::ops::Range<usize>) -> (f64, (usize, usize)) {
        let mut best = (0.0, (rows.start, 0));
        for (i, j, v) in self.entries() {
            if rows.contains(&i) {
                let a = v.to_f64_lossy().abs();
                if a > best.0 || a.is_nan() {
                    best = (a, (i, j));
                }
            }
        }
        best
    }
}

/// Exact banded product. Output bandwidth is the sum of the input bandwidths.
pub fn band_mul<T: Scalar>(a: &BandMatrix<T>, b: &BandMatrix<T>) -> Result<BandMatrix<T>> {
    if a.size != b.size {
        return Err(Error::SizeMismatch(a.size, b.size));
    }
    let n = a.size;
    let lower = a.lower + b.lower;
    let upper = a.upper + b.upper;
    let mut out = BandMatrix::zeros(n, lower, upper);
    for i in 0..n {
        let k_lo = i.saturating_sub(a.lower);
        let k_hi = (i + a.upper).min(n.saturating_sub(1));
        let j_lo = i.saturating_sub(lower);
        let j_hi = (i + upper).min(n.saturating_sub(1));
        for j in j_lo..=j_hi {
            let mut acc = T::zero();
            for k in k_lo.max(j.saturating_sub(b.upper))..=k_hi.min(j + b.lower) {
                acc = acc + a.get(i, k) * b.get(k, j);
            }
            out.set(i, j, acc);
        }
    }
    Ok(out)
}

/// `D⁻¹ M D` with `D = diag(d)`: entry `(i, j)` is scaled by `d_j / d_i`.
pub fn diag_similarity<T: Scalar>(m: &BandMatrix<T>, d: &[T]) -> Result<BandMatrix<T>> {
    if d.len() != m.size() {
        return Err(Error::SizeMismatch(d.len(), m.size()));
    }
    if let Some(i) = d.iter().position(|x| x.is_zero()) {
        return Err(Error::InvalidParameter(format!(
            "similarity diagonal entry {i} is zero"
        )));
    }
    let mut out = m.clone();
    for (i, j, v) in m.entries() {
        if i != j {
            out.set(i, j, v.clone() * d[j].clone() / d[i].clone());
        }
    }
    Ok(out)
}

/// Refuse sizes whose entries would scale beyond `1e12` (like `q^{±size}`).
pub fn overflow_guard<T: Scalar>(q: &T, size: usize) -> Result<()> {
    let qa = q.to_f64_lossy().abs();
    let e = size as f64;
    let magnitude = qa.powf(e).max(qa.powf(-e));
    if !(magnitude <= 1e12) {
        return Err(Error::OverflowGuard {
            size,
            q: q.to_f64_lossy(),
            magnitude,
        });
    }
    Ok(())
}
