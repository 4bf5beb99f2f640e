//! Hermite normal form and canonical forms for lattice equality.
//!
//! Convention: rows are lattice vectors. Elimination runs from the last
//! coordinate to the first, so the result is lower echelon: the `k`-th row
//! has its pivot (a positive entry) at column `c_k`, zeros after it, and
//! `c_0 < c_1 < …`. Every entry sitting in another row's pivot column is
//! reduced into `[0, pivot)`. The form is unique for a given lattice.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{LatticeError, Result};
use crate::linalg::{common_dim, LatticeBasis, LatticeVector, Scalar};

/// Hermite normal form of the lattice generated by integer rows.
/// Zero rows are ignored; an empty input gives an empty form.
pub fn hnf_rows(rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let Some(dim) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut work: Vec<Vec<BigInt>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    // (pivot column, row), collected in decreasing column order
    let mut pivots: Vec<(usize, Vec<BigInt>)> = Vec::new();

    for c in (0..dim).rev() {
        loop {
            let active: Vec<usize> = (0..work.len()).filter(|&i| !work[i][c].is_zero()).collect();
            match active.len() {
                0 => break,
                1 => {
                    let mut row = work.swap_remove(active[0]);
                    if row[c].is_negative() {
                        row.iter_mut().for_each(|x| *x = -&*x);
                    }
                    pivots.push((c, row));
                    break;
                }
                _ => {
                    let &best = active
                        .iter()
                        .min_by(|&&a, &&b| work[a][c].abs().cmp(&work[b][c].abs()))
                        .unwrap();
                    let pivot_row = work[best].clone();
                    for &i in &active {
                        if i == best {
                            continue;
                        }
                        let q = &work[i][c] / &pivot_row[c];
                        if q.is_zero() {
                            continue;
                        }
                        for j in 0..=c {
                            let t = &q * &pivot_row[j];
                            work[i][j] -= t;
                        }
                    }
                    work.retain(|r| r.iter().any(|x| !x.is_zero()));
                }
            }
        }
    }

    // pivots is ordered by decreasing column; reduce each row against the
    // pivots to its left, from the largest such column down.
    let n = pivots.len();
    for qi in 0..n {
        for pi in qi + 1..n {
            let (cp, prow) = (pivots[pi].0, pivots[pi].1.clone());
            let f = pivots[qi].1[cp].div_floor(&prow[cp]);
            if f.is_zero() {
                continue;
            }
            let row = &mut pivots[qi].1;
            for j in 0..=cp {
                let t = &f * &prow[j];
                row[j] -= t;
            }
        }
    }
    pivots.into_iter().rev().map(|(_, r)| r).collect()
}

/// Hermite normal form of integer vectors.
pub fn hnf(vectors: &[LatticeVector]) -> Result<Vec<LatticeVector>> {
    common_dim(vectors)?;
    let rows = vectors
        .iter()
        .map(|v| {
            if !v.is_integral() {
                return Err(LatticeError::NonIntegral);
            }
            Ok(v.coords().iter().map(|c| c.to_integer()).collect())
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(hnf_rows(rows)
        .into_iter()
        .map(|r| LatticeVector::new(r.into_iter().map(Scalar::from_integer).collect()))
        .collect())
}

/// Basis-independent description of a rational lattice: the smallest
/// `scale` with `scale * L ⊆ ℤ^d`, together with the HNF of `scale * L`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub dim: usize,
    pub scale: BigInt,
    pub rows: Vec<Vec<BigInt>>,
}

impl CanonicalForm {
    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// The HNF rows mapped back to the original (unscaled) lattice.
    pub fn basis_vectors(&self) -> Vec<LatticeVector> {
        self.rows
            .iter()
            .map(|r| {
                LatticeVector::new(
                    r.iter()
                        .map(|x| Scalar::new(x.clone(), self.scale.clone()))
                        .collect(),
                )
            })
            .collect()
    }
}

/// Canonical form of the lattice generated by `vectors` in `dim`-space.
///
/// `scale` is the lcm of all coordinate denominators, which is an invariant of
/// the generated lattice, so equal lattices give equal forms.
pub fn canonical_form(dim: usize, vectors: &[LatticeVector]) -> Result<CanonicalForm> {
    for v in vectors {
        if v.dim() != dim {
            return Err(LatticeError::DimensionMismatch {
                expected: dim,
                found: v.dim(),
            });
        }
    }
    let scale = vectors
        .iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&v.denominator_lcm()));
    let rows = vectors
        .iter()
        .map(|v| {
            v.coords()
                .iter()
                .map(|c| c.numer() * (&scale / c.denom()))
                .collect()
        })
        .collect();
    Ok(CanonicalForm {
        dim,
        scale,
        rows: hnf_rows(rows),
    })
}

/// Something that names a lattice: a basis or a list of generators.
pub trait Generators {
    fn ambient_dim(&self) -> Option<usize>;
    fn generator_slice(&self) -> &[LatticeVector];
}

impl Generators for LatticeBasis {
    fn ambient_dim(&self) -> Option<usize> {
        Some(self.dim())
    }
    fn generator_slice(&self) -> &[LatticeVector] {
        self.vectors()
    }
}

impl Generators for [LatticeVector] {
    fn ambient_dim(&self) -> Option<usize> {
        self.first().map(LatticeVector::dim)
    }
    fn generator_slice(&self) -> &[LatticeVector] {
        self
    }
}

impl Generators for Vec<LatticeVector> {
    fn ambient_dim(&self) -> Option<usize> {
        self.as_slice().ambient_dim()
    }
    fn generator_slice(&self) -> &[LatticeVector] {
        self
    }
}

/// Do `a` and `b` generate the same lattice?
pub fn lattice_equal<A, B>(a: &A, b: &B) -> Result<bool>
where
    A: Generators + ?Sized,
    B: Generators + ?Sized,
{
    let dim = match (a.ambient_dim(), b.ambient_dim()) {
        (Some(x), Some(y)) if x != y => {
            return Err(LatticeError::DimensionMismatch {
                expected: x,
                found: y,
            })
        }
        (Some(x), _) | (None, Some(x)) => x,
        (None, None) => return Ok(true),
    };
    Ok(canonical_form(dim, a.generator_slice())? == canonical_form(dim, b.generator_slice())?)
}
