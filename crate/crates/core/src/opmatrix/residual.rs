use std::ops::Range;

use serde::Serialize;

use super::{band_mul, BandMatrix};
use crate::numerics::{Scalar, TolerancePolicy};
use crate::{Error, Result};

/// Identity-violation record: the common currency of every check.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub location: (usize, usize),
    pub checked_rows: Range<usize>,
    pub scale: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    /// Report over `rows` of a defect matrix at the given scale.
    pub fn from_defect<T: Scalar>(
        defect: &BandMatrix<T>,
        rows: Range<usize>,
        scale: f64,
        pol: &TolerancePolicy,
    ) -> Self {
        let (max_abs, location) = defect.max_abs_in_rows(rows.clone());
        Self::from_value(max_abs, location, rows, scale, pol)
    }

    pub fn from_value(
        max_abs: f64,
        location: (usize, usize),
        rows: Range<usize>,
        scale: f64,
        pol: &TolerancePolicy,
    ) -> Self {
        let tolerance = pol.effective(scale);
        Self {
            max_abs,
            location,
            checked_rows: rows,
            scale,
            tolerance,
            pass: max_abs <= tolerance,
        }
    }

    /// Worst of several reports (fails if any fails).
    pub fn worst(reports: &[ResidualReport]) -> Option<ResidualReport> {
        let mut it = reports.iter();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, r| {
            let ratio = |x: &ResidualReport| x.max_abs / x.tolerance;
            let mut pick = if ratio(r) > ratio(&acc) || r.max_abs.is_nan() {
                r.clone()
            } else {
                acc.clone()
            };
            pick.pass = acc.pass && r.pass;
            pick
        }))
    }
}

/// Full defect `AB − qBA − rhs` over all rows.
pub fn q_commutator_defect<T: Scalar>(
    a: &BandMatrix<T>,
    b: &BandMatrix<T>,
    q: &T,
    rhs: &BandMatrix<T>,
) -> Result<BandMatrix<T>> {
    let ab = band_mul(a, b)?;
    let ba = band_mul(b, a)?;
    BandMatrix::lincomb(&[(T::one(), &ab), (-q.clone(), &ba), (-T::one(), rhs)])
}

/// `AB − qBA − rhs` on rows `0..size−1`. The last row is excluded: a finite
/// truncation of semi-infinite tridiagonal operators corrupts exactly that
/// row of a product.
pub fn q_commutator_residual<T: Scalar>(
    a: &BandMatrix<T>,
    b: &BandMatrix<T>,
    q: &T,
    rhs: &BandMatrix<T>,
    pol: &TolerancePolicy,
) -> Result<ResidualReport> {
    let n = a.size();
    if n < 3 {
        return Err(Error::TooSmall { size: n, min: 3 });
    }
    for m in [b, rhs] {
        if m.size() != n {
            return Err(Error::SizeMismatch(m.size(), n));
        }
    }
    let defect = q_commutator_defect(a, b, q, rhs)?;
    let scale = pol.scale_for(a.norm_inf(), b.norm_inf());
    Ok(ResidualReport::from_defect(&defect, 0..n - 1, scale, pol))
}

/// A truncated operator together with the number of leading rows on which it
/// agrees with the semi-infinite operator it approximates.
#[derive(Clone, Debug)]
pub struct Truncated<T> {
    pub matrix: BandMatrix<T>,
    pub valid_rows: usize,
}

impl<T: Scalar> Truncated<T> {
    /// Operator whose finite entries are exact (all rows valid).
    pub fn exact(matrix: BandMatrix<T>) -> Self {
        let valid_rows = matrix.size();
        Self { matrix, valid_rows }
    }

    /// Product with validity bookkeeping: row `i` of `XY` is exact when row
    /// `i` of `X` is valid and every row of `Y` it touches is valid and lies
    /// inside the truncation (automatic when `Y` has no subdiagonal).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        let matrix = band_mul(&self.matrix, &other.matrix)?;
        let n = matrix.size();
        let ux = self.matrix.upper();
        let ly = other.matrix.lower();
        let valid_rows = (0..n)
            .take_while(|&i| {
                let reach = i + ux;
                i < self.valid_rows
                    && (ly == 0 || reach < n)
                    && reach.min(n.saturating_sub(1)) < other.valid_rows
            })
            .count();
        Ok(Self { matrix, valid_rows })
    }

    pub fn lincomb(terms: &[(T, &Truncated<T>)]) -> Result<Self> {
        let mats: Vec<(T, &BandMatrix<T>)> =
            terms.iter().map(|(c, t)| (c.clone(), &t.matrix)).collect();
        let matrix = BandMatrix::lincomb(&mats)?;
        let valid_rows = terms.iter().map(|(_, t)| t.valid_rows).min().unwrap_or(0);
        Ok(Self { matrix, valid_rows })
    }

    pub fn add_identity(&self, c: &T) -> Self {
        Self {
            matrix: self.matrix.add_identity(c),
            valid_rows: self.valid_rows,
        }
    }

    pub fn report(&self, scale: f64, pol: &TolerancePolicy) -> ResidualReport {
        ResidualReport::from_defect(&self.matrix, 0..self.valid_rows, scale, pol)
    }
}

/// `XY − qYX` with row validity tracked.
pub fn q_commutator<T: Scalar>(x: &Truncated<T>, y: &Truncated<T>, q: &T) -> Result<Truncated<T>> {
    let xy = x.mul(y)?;
    let yx = y.mul(x)?;
    Truncated::lincomb(&[(T::one(), &xy), (-q.clone(), &yx)])
}
