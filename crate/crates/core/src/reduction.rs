//! MLLL: LLL reduction of a possibly linearly dependent generating set.
//!
//! The reduction keeps an independent, reduced prefix `b[0..k]` with its
//! Gram–Schmidt data and processes `b[k]`: size-reduce it against the prefix,
//! drop it if it became the zero vector, otherwise either accept it or swap it
//! below its predecessor when the Lovász condition fails. A vector dependent
//! on the prefix has a zero Gram–Schmidt component, so it always fails the
//! Lovász test and sinks until size reduction turns it into zero.
//! All arithmetic is exact.

use num_traits::{Signed, Zero};

use crate::error::{LatticeError, Result};
use crate::linalg::{common_dim, int, ratio, round_nearest, LatticeBasis, LatticeVector, Scalar};

/// Lovász parameter `delta ∈ (1/4, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionParams {
    delta: Scalar,
}

impl ReductionParams {
    pub fn new(delta: Scalar) -> Result<Self> {
        if delta <= ratio(1, 4) || delta > int(1) {
            return Err(LatticeError::InvalidDelta(Box::new(delta)));
        }
        Ok(Self { delta })
    }

    pub fn delta(&self) -> &Scalar {
        &self.delta
    }
}

impl Default for ReductionParams {
    fn default() -> Self {
        Self { delta: ratio(3, 4) }
    }
}

/// Counters from one reduction run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReductionStats {
    pub swaps: usize,
    pub size_reductions: usize,
    pub dropped: usize,
}

/// Reduced basis of the lattice generated by `generators`.
///
/// Output vectors are sign-normalized (leading nonzero coordinate positive).
/// An empty or all-zero input yields the empty basis; its ambient dimension
/// is taken from the input (0 when the input is empty).
pub fn mlll(generators: &[LatticeVector], params: &ReductionParams) -> Result<LatticeBasis> {
    let dim = common_dim(generators)?.unwrap_or(0);
    Ok(mlll_with_stats(dim, generators.to_vec(), params).0)
}

/// [`mlll`] for a known ambient dimension, also returning the counters.
pub fn mlll_with_stats(
    dim: usize,
    generators: Vec<LatticeVector>,
    params: &ReductionParams,
) -> (LatticeBasis, ReductionStats) {
    let delta = &params.delta;
    let half = ratio(1, 2);
    let mut stats = ReductionStats::default();
    let mut b: Vec<LatticeVector> = generators.into_iter().filter(|v| !v.is_zero()).collect();
    // Gram–Schmidt data of the accepted prefix b[0..k]
    let mut mu: Vec<Vec<Scalar>> = Vec::new();
    let mut bstar: Vec<Scalar> = Vec::new();
    let mut k = 0;

    while k < b.len() {
        let mut row = vec![Scalar::zero(); k];
        for j in 0..k {
            let mut s = b[k].dot(&b[j]).expect("dimensions checked");
            for i in 0..j {
                s -= &mu[j][i] * &row[i] * &bstar[i];
            }
            row[j] = s / &bstar[j];
        }

        for j in (0..k).rev() {
            if row[j].abs() <= half {
                continue;
            }
            let q = Scalar::from_integer(round_nearest(&row[j]));
            b[k] = b[k].add_scaled(&-&q, &b[j]);
            for i in 0..j {
                let t = &q * &mu[j][i];
                row[i] -= t;
            }
            row[j] -= &q;
            stats.size_reductions += 1;
        }

        if b[k].is_zero() {
            b.remove(k);
            stats.dropped += 1;
            continue;
        }

        let mut bk = b[k].norm_sq();
        for j in 0..k {
            bk -= &row[j] * &row[j] * &bstar[j];
        }
        if k > 0 && bk < (delta - &row[k - 1] * &row[k - 1]) * &bstar[k - 1] {
            b.swap(k - 1, k);
            k -= 1;
            mu.truncate(k);
            bstar.truncate(k);
            stats.swaps += 1;
            continue;
        }
        mu.push(row);
        bstar.push(bk);
        k += 1;
    }

    let b = b.into_iter().map(LatticeVector::sign_normalized).collect();
    (LatticeBasis::from_independent(dim, b), stats)
}

/// Update step: a basis of `L(basis) + ℤv`.
pub fn basis_union(
    basis: &LatticeBasis,
    v: &LatticeVector,
    params: &ReductionParams,
) -> Result<LatticeBasis> {
    if v.dim() != basis.dim() {
        return Err(LatticeError::DimensionMismatch {
            expected: basis.dim(),
            found: v.dim(),
        });
    }
    let mut gens = basis.vectors().to_vec();
    gens.push(v.clone());
    Ok(mlll_with_stats(basis.dim(), gens, params).0)
}

/// Gram–Schmidt coefficients `mu[i][j]` (`j < i`) and squared norms of the
/// orthogonalized vectors, computed directly by projection.
pub fn gram_schmidt(vectors: &[LatticeVector]) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let mut ortho: Vec<LatticeVector> = Vec::with_capacity(vectors.len());
    let mut norms: Vec<Scalar> = Vec::with_capacity(vectors.len());
    let mut mu = Vec::with_capacity(vectors.len());
    for v in vectors {
        let mut w = v.clone();
        let mut row = Vec::with_capacity(ortho.len());
        for (o, n) in ortho.iter().zip(&norms) {
            let m = if n.is_zero() {
                Scalar::zero()
            } else {
                v.dot(o).expect("dimensions checked") / n
            };
            w = w.add_scaled(&-&m, o);
            row.push(m);
        }
        norms.push(w.norm_sq());
        ortho.push(w);
        mu.push(row);
    }
    (mu, norms)
}

/// Size-reduced (`|mu_ij| ≤ 1/2`) and Lovász condition on consecutive pairs.
pub fn is_lll_reduced(vectors: &[LatticeVector], params: &ReductionParams) -> bool {
    let (mu, norms) = gram_schmidt(vectors);
    let half = ratio(1, 2);
    let size_reduced = mu.iter().flatten().all(|m| m.abs() <= half);
    let lovasz = (1..vectors.len())
        .all(|k| norms[k] >= (&params.delta - &mu[k][k - 1] * &mu[k][k - 1]) * &norms[k - 1]);
    size_reduced && lovasz
}
