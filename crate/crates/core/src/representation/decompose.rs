use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::numerics::{Scalar, TolerancePolicy};
use crate::opmatrix::{eigenvalues, BandMatrix, ResidualReport};
use crate::{Error, Result};

/// One invariant block: a chain `λ, λ/q, λ/q², …` of eigenvalues of `A`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Block {
    pub spectrum: Vec<f64>,
    pub size: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Decomposition {
    pub blocks: Vec<Block>,
    pub eigenvalues: Vec<f64>,
    /// Largest `|w_iᵀ B v_j| / (|w_i|ᵀ |B| |v_j|)` over eigenvector pairs in
    /// different blocks.
    pub off_block: ResidualReport,
}

/// Splits `eigs` into maximal chains under `λ ↦ λ/q`, each listed from the
/// element without a predecessor. Links are accepted at relative distance
/// `tol`; a second candidate within `tol` or two predecessors of one element
/// is an error.
pub fn chain_partition(eigs: &[f64], q: f64, tol: f64) -> Result<Vec<Vec<usize>>> {
    let n = eigs.len();
    let mut succ: Vec<Option<usize>> = vec![None; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    for i in 0..n {
        let target = eigs[i] / q;
        let close: Vec<usize> = (0..n)
            .filter(|&j| j != i)
            .filter(|&j| (eigs[j] - target).abs() <= tol * target.abs().max(eigs[j].abs()))
            .collect();
        match close.as_slice() {
            [] => {}
            [j] => {
                if let Some(other) = pred[*j] {
                    return Err(Error::NotDecomposable(format!(
                        "eigenvalues {:.12e} and {:.12e} both map to {:.12e}",
                        eigs[other], eigs[i], eigs[*j]
                    )));
                }
                succ[i] = Some(*j);
                pred[*j] = Some(i);
            }
            _ => {
                return Err(Error::NotDecomposable(format!(
                    "eigenvalue {:.12e} has {} candidate successors",
                    eigs[i],
                    close.len()
                )))
            }
        }
    }
    let mut chains = Vec::new();
    let mut seen = vec![false; n];
    for start in (0..n).filter(|&i| pred[i].is_none()) {
        let mut chain = Vec::new();
        let mut cur = Some(start);
        while let Some(i) = cur {
            if seen[i] {
                break;
            }
            seen[i] = true;
            chain.push(i);
            cur = succ[i];
        }
        chains.push(chain);
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(Error::NotDecomposable(format!(
            "eigenvalue {:.12e} lies on a closed chain",
            eigs[i]
        )));
    }
    Ok(chains)
}

fn null_vectors(m: &DMatrix<f64>) -> (DVector<f64>, DVector<f64>) {
    let svd = m.clone().svd(true, true);
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("nonempty matrix");
    let u = svd.u.expect("left singular vectors");
    let vt = svd.v_t.expect("right singular vectors");
    (u.column(k).into_owned(), vt.row(k).transpose())
}

/// Partitions the spectrum of `A` into chains under multiplication by `q⁻¹`
/// and certifies that `B` keeps each chain's eigenspan invariant.
pub fn decompose<T: Scalar>(
    a: &BandMatrix<T>,
    b: &BandMatrix<T>,
    q: &T,
    pol: &TolerancePolicy,
) -> Result<Decomposition> {
    let n = a.size();
    if b.size() != n {
        return Err(Error::SizeMismatch(b.size(), n));
    }
    let qf = q.to_f64_lossy();
    if qf == 0.0 || qf.abs() == 1.0 {
        return Err(Error::InvalidParameter(format!("q = {qf} admits no chains")));
    }
    let eigs = eigenvalues(a, pol)?;
    let chain_tol = pol.rel_tol.max(pol.abs_tol).sqrt().max(1e-6);
    let chains = chain_partition(&eigs, qf, chain_tol)?;

    let ad = DMatrix::from_fn(n, n, |i, j| a.get(i, j).to_f64_lossy());
    let bd = DMatrix::from_fn(n, n, |i, j| b.get(i, j).to_f64_lossy());
    let mut left = Vec::with_capacity(n);
    let mut right = Vec::with_capacity(n);
    for &lam in &eigs {
        let shifted = &ad - DMatrix::identity(n, n) * lam;
        let (w, v) = null_vectors(&shifted);
        left.push(w);
        right.push(v);
    }

    let mut block_of = vec![0usize; n];
    for (k, c) in chains.iter().enumerate() {
        for &i in c {
            block_of[i] = k;
        }
    }
    let babs = bd.abs();
    let mut worst = (0.0f64, (0usize, 0usize));
    for i in 0..n {
        for j in 0..n {
            if block_of[i] == block_of[j] {
                continue;
            }
            let num = (left[i].transpose() * &bd * &right[j])[(0, 0)].abs();
            let den = (left[i].abs().transpose() * &babs * right[j].abs())[(0, 0)];
            let mass = if den == 0.0 { 0.0 } else { num / den };
            if mass > worst.0 || mass.is_nan() {
                worst = (mass, (i, j));
            }
        }
    }
    let off_block = ResidualReport::from_value(worst.0, worst.1, 0..n, 1.0, pol);

    let mut blocks: Vec<Block> = chains
        .iter()
        .map(|c| Block {
            spectrum: c.iter().map(|&i| eigs[i]).collect(),
            size: c.len(),
        })
        .collect();
    blocks.sort_by(|x, y| {
        y.size
            .cmp(&x.size)
            .then(x.spectrum[0].total_cmp(&y.spectrum[0]))
    });
    Ok(Decomposition {
        blocks,
        eigenvalues: eigs,
        off_block,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::representation::canonical_pair;

    #[test]
    fn chains_of_diagonal() {
        let q = 0.5;
        let eigs = [1.0, 2.0, 5.0, 10.0];
        let chains = chain_partition(&eigs, q, 1e-9).unwrap();
        assert_eq!(chains, vec![vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn branching_is_rejected() {
        let eigs = [1.0, 1.0 + 1e-12, 2.0];
        assert!(matches!(
            chain_partition(&eigs, 0.5, 1e-9),
            Err(Error::NotDecomposable(_))
        ));
    }

    #[test]
    fn direct_sum_of_canonical_pairs() {
        let q = 0.5;
        let (a1, b1) = canonical_pair(&1.0, &q, 2).unwrap();
        let (a2, b2) = canonical_pair(&5.0, &q, 2).unwrap();
        let mut a = BandMatrix::zeros(4, 1, 1);
        let mut b = BandMatrix::zeros(4, 1, 1);
        for (off, (x, y)) in [(0, (&a1, &b1)), (2, (&a2, &b2))] {
            for i in 0..2 {
                for j in 0..2 {
                    a.set(off + i, off + j, x.get(i, j));
                    b.set(off + i, off + j, y.get(i, j));
                }
            }
        }
        let d = decompose(&a, &b, &q, &TolerancePolicy::default()).unwrap();
        assert_eq!(d.blocks.len(), 2);
        assert!(d.off_block.pass, "{:?}", d.off_block);
        assert_eq!(d.blocks[0].spectrum, vec![1.0, 2.0]);
    }

    #[test]
    fn finite_families_split_as_claimed() {
        use crate::families::{q_hahn, q_para_krawtchouk};
        use crate::tridiagonalization::finite_family_pair;
        let pol = TolerancePolicy::default();
        for (q, c3) in [(0.5, 0.2), (0.6, 0.25)] {
            for n in [3, 5, 7] {
                let rec = q_para_krawtchouk(&c3, &q, n).unwrap();
                let (a, b) = finite_family_pair(&rec).unwrap();
                let d = decompose(&a, &b, &q, &pol).unwrap();
                assert_eq!(d.blocks.len(), 2, "q = {q}, N = {n}");
                assert!(d.blocks.iter().all(|bl| bl.size == (n + 1) / 2));
                assert!(d.off_block.max_abs <= 1e-8, "{:?}", d.off_block);
            }
        }
        let rec = q_hahn(&0.3, &0.4, &0.7, 7).unwrap();
        let (a, b) = finite_family_pair(&rec).unwrap();
        let d = decompose(&a, &b, &0.7, &pol).unwrap();
        assert_eq!(d.blocks.len(), 1);
    }
}
