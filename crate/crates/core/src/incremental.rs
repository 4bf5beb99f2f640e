//! Incremental lattice basis construction.
//!
//! Generators are inserted one at a time. Each insertion first runs a
//! membership test against the lattice built so far (localization); only a
//! vector outside it triggers a basis recomputation (update). The trace keeps
//! enough data to check the update-count bound
//! `u ≤ d + log₂(d! (B/λ₁)^d)` exactly after the fact.

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{LatticeError, Result};
use crate::linalg::{common_dim, solve_square, LatticeBasis, LatticeVector, Scalar};
use crate::reduction::{mlll_with_stats, ReductionParams};

/// One insertion of the chain `ℤv₁ ⊆ ℤv₁ + ℤv₂ ⊆ …`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Insertion {
    /// Position of the generator in the input.
    pub index: usize,
    /// The generator was outside the current lattice.
    pub was_update: bool,
    pub rank_after: usize,
    pub volume_sq_after: Scalar,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct UpdateTrace {
    pub insertions: Vec<Insertion>,
    pub update_count: usize,
}

impl UpdateTrace {
    /// Number of membership tests performed, one per nonzero generator.
    pub fn membership_tests(&self) -> usize {
        self.insertions.len()
    }

    /// Checks the structural invariants of the chain: the update counter
    /// matches, ranks never drop, and within a run of equal rank the volume
    /// strictly decreases at updates and stays put otherwise.
    pub fn is_consistent(&self) -> bool {
        let updates = self.insertions.iter().filter(|r| r.was_update).count();
        if updates != self.update_count {
            return false;
        }
        let mut prev: Option<&Insertion> = None;
        for rec in &self.insertions {
            if let Some(p) = prev {
                if rec.rank_after < p.rank_after {
                    return false;
                }
                if rec.rank_after == p.rank_after {
                    let ok = if rec.was_update {
                        rec.volume_sq_after < p.volume_sq_after
                    } else {
                        rec.volume_sq_after == p.volume_sq_after
                    };
                    if !ok {
                        return false;
                    }
                }
            } else if !rec.was_update {
                return false;
            }
            prev = Some(rec);
        }
        true
    }
}

/// Basis of the lattice generated by `generators`, built by insertion.
///
/// Zero generators are skipped without a trace record. The ambient dimension
/// of an empty input is 0.
pub fn incremental_basis(
    generators: &[LatticeVector],
    params: &ReductionParams,
) -> Result<(LatticeBasis, UpdateTrace)> {
    let dim = common_dim(generators)?.unwrap_or(0);
    let mut basis = LatticeBasis::empty(dim);
    let mut local = Localizer::new(&basis);
    let mut volume_sq = basis.volume_sq();
    let mut trace = UpdateTrace::default();
    for (index, v) in generators.iter().enumerate() {
        if v.is_zero() {
            continue;
        }
        let was_update = !local.contains(v);
        if was_update {
            let mut gens = basis.into_vectors();
            gens.push(v.clone());
            basis = mlll_with_stats(dim, gens, params).0;
            local = Localizer::new(&basis);
            volume_sq = basis.volume_sq();
            trace.update_count += 1;
        }
        trace.insertions.push(Insertion {
            index,
            was_update,
            rank_after: basis.rank(),
            volume_sq_after: volume_sq.clone(),
        });
    }
    Ok((basis, trace))
}

/// Membership test with the projection `G⁻¹B` computed once per basis, so
/// each test is a matrix-vector product plus a reconstruction check.
struct Localizer {
    basis: Vec<LatticeVector>,
    proj: Vec<Vec<Scalar>>,
}

impl Localizer {
    fn new(basis: &LatticeBasis) -> Self {
        let k = basis.rank();
        let gram = basis.gram();
        // columns of G⁻¹
        let inv_cols: Vec<Vec<Scalar>> = (0..k)
            .map(|c| {
                let e: Vec<Scalar> = (0..k).map(|r| if r == c { Scalar::one() } else { Scalar::zero() }).collect();
                solve_square(gram, &e).expect("basis Gram matrix is nonsingular")
            })
            .collect();
        let proj = (0..k)
            .map(|i| {
                (0..basis.dim())
                    .map(|j| {
                        basis.vectors().iter().enumerate().fold(Scalar::zero(), |acc, (l, b)| {
                            let g = &inv_cols[l][i];
                            if g.is_zero() || b.coords()[j].is_zero() {
                                acc
                            } else {
                                acc + g * &b.coords()[j]
                            }
                        })
                    })
                    .collect()
            })
            .collect();
        Self {
            basis: basis.vectors().to_vec(),
            proj,
        }
    }

    fn contains(&self, v: &LatticeVector) -> bool {
        let mut rebuilt = LatticeVector::zero(v.dim());
        for (row, b) in self.proj.iter().zip(&self.basis) {
            let c = row
                .iter()
                .zip(v.coords())
                .filter(|(p, x)| !p.is_zero() && !x.is_zero())
                .fold(Scalar::zero(), |acc, (p, x)| acc + p * x);
            if !c.is_integer() {
                return false;
            }
            if !c.is_zero() {
                rebuilt = rebuilt.add_scaled(&c, b);
            }
        }
        rebuilt == *v
    }
}

/// Exact form of `u ≤ d + log₂(d! (B/λ₁)^d)`:
/// `4^(u−d) ≤ (d!)² (B²/λ₁²)^d` when `u > d`, trivially true otherwise.
pub fn update_bound_holds(
    update_count: usize,
    d: usize,
    bound_sq: &Scalar,
    lambda1_sq: &Scalar,
) -> Result<bool> {
    if *lambda1_sq <= Scalar::zero() {
        return Err(LatticeError::NonPositive("lambda1_sq"));
    }
    if update_count <= d {
        return Ok(true);
    }
    let excess = u32::try_from(update_count - d).expect("update count fits in u32");
    let lhs = Scalar::from_integer(BigInt::from(4u32).pow(excess));
    let fact: BigInt = (1..=d).fold(BigInt::one(), |acc, k| acc * k);
    let ratio = bound_sq / lambda1_sq;
    let rhs = Scalar::from_integer(&fact * &fact) * Pow::pow(&ratio, d);
    Ok(lhs <= rhs)
}

pub fn update_step_bound_holds(
    trace: &UpdateTrace,
    d: usize,
    bound_sq: &Scalar,
    lambda1_sq: &Scalar,
) -> Result<bool> {
    update_bound_holds(trace.update_count, d, bound_sq, lambda1_sq)
}

/// `d + log₂(d!) + (d/2) log₂(B²/λ₁²)` as a float, for reporting.
pub fn theorem_bound(d: usize, bound_sq: &Scalar, lambda1_sq: &Scalar) -> f64 {
    use num_traits::ToPrimitive;
    let log_fact: f64 = (2..=d).map(|k| (k as f64).log2()).sum();
    let ratio = (bound_sq / lambda1_sq).to_f64().unwrap_or(f64::INFINITY);
    d as f64 + log_fact + d as f64 / 2.0 * ratio.log2()
}

/// The generators whose insertion was an update. They generate the same
/// lattice as the whole input.
pub fn generating_subset(generators: &[LatticeVector], trace: &UpdateTrace) -> Vec<LatticeVector> {
    trace
        .insertions
        .iter()
        .filter(|r| r.was_update)
        .map(|r| generators[r.index].clone())
        .collect()
}

/// `max |v|²` over the generators, the `B²` of the bound.
pub fn max_norm_sq(generators: &[LatticeVector]) -> Scalar {
    generators
        .iter()
        .map(LatticeVector::norm_sq)
        .max()
        .unwrap_or_else(Scalar::zero)
}
