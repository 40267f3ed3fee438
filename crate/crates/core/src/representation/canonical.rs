use crate::numerics::Scalar;
use crate::opmatrix::BandMatrix;
use crate::{Error, Result};

/// Canonical finite pair: `A_c = diag(a q^{−n})`, `B_c` upper bidiagonal with
/// diagonal `a′ qⁿ` (`a a′ (1 − q) = 1`) and unit superdiagonal.
///
/// The diagonal of `A_c` is generated by repeated division by `q` and the
/// diagonal of `B_c` as `1/((1 − q) a_n)`, so every entry of
/// `A_c B_c − q B_c A_c − I` is a few roundings away from zero at any size.
pub fn canonical_pair<T: Scalar>(a: &T, q: &T, size: usize) -> Result<(BandMatrix<T>, BandMatrix<T>)> {
    if q.is_zero() || q.is_one() {
        return Err(Error::InvalidParameter(format!(
            "canonical pair needs q outside {{0, 1}}, got {:?}",
            q
        )));
    }
    if a.is_zero() {
        return Err(Error::InvalidParameter("a must be nonzero".into()));
    }
    if size == 0 {
        return Err(Error::TooSmall { size, min: 1 });
    }
    let omq = T::one() - q.clone();
    let mut ad = Vec::with_capacity(size);
    let mut cur = a.clone();
    for _ in 0..size {
        ad.push(cur.clone());
        cur = cur / q.clone();
    }
    let bd = ad.iter().map(|x| T::one() / (omq.clone() * x.clone())).collect();
    let ac = BandMatrix::diagonal(ad);
    let bc = BandMatrix::tridiagonal(vec![T::zero(); size - 1], bd, vec![T::one(); size - 1])?;
    Ok((ac, bc))
}
