//! Successive minima from a complete generating system.
//!
//! Vectors are scanned in nondecreasing norm. A running subspace `U` starts
//! empty; every scanned vector outside `U` extends it by one dimension and
//! fixes the next minimum. Exactly `rank(L)` extensions happen.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::enumerate::{enumerate_up_to, EnumerationRequest};
use crate::error::{LatticeError, Result};
use crate::linalg::{rank, sort_by_norm, GeneratingSet, LatticeBasis, LatticeVector, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinimaResult {
    /// `λ_k²` for `k = 1..=rank`, nondecreasing.
    pub minima_sq: Vec<Scalar>,
    /// Linearly independent vectors with `|witnesses[k]|² = minima_sq[k]`.
    pub witnesses: Vec<LatticeVector>,
    pub rank: usize,
    /// The bound was too small to reach every minimum of the lattice.
    pub partial: bool,
    /// Number of vectors examined before the scan stopped.
    pub scanned: usize,
}

/// Row echelon basis of a growing real subspace.
#[derive(Clone, Debug, Default)]
struct Subspace {
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Subspace {
    fn dim(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v` if it lies outside the subspace; returns whether it did.
    fn extend(&mut self, v: &LatticeVector) -> bool {
        let mut w = v.coords().to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (x, r) in w.iter_mut().zip(row) {
                *x -= &f * r;
            }
        }
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let pivot = w[p].clone();
        w.iter_mut().for_each(|x| *x /= &pivot);
        for (_, row) in &mut self.rows {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&w) {
                *x -= &f * r;
            }
        }
        self.rows.push((p, w));
        true
    }
}

/// Successive minima of the lattice generated by a complete set.
pub fn successive_minima(s: &GeneratingSet) -> Result<MinimaResult> {
    if !s.is_complete() {
        return Err(LatticeError::Incomplete);
    }
    if s.is_empty() {
        return Err(LatticeError::EmptyInput);
    }
    scan(&s.sorted_by_norm())
}

/// Same scan over a caller-chosen order, which must be nondecreasing in norm.
/// Lets tests reorder vectors of equal norm.
pub fn successive_minima_in_order(vectors: &[LatticeVector]) -> Result<MinimaResult> {
    if vectors.is_empty() {
        return Err(LatticeError::EmptyInput);
    }
    if vectors.windows(2).any(|w| w[0].norm_sq() > w[1].norm_sq()) {
        return Err(LatticeError::NotNormOrdered);
    }
    scan(vectors)
}

fn scan(sorted: &[LatticeVector]) -> Result<MinimaResult> {
    let ambient = sorted[0].dim();
    let mut u = Subspace::default();
    let mut minima_sq = Vec::new();
    let mut witnesses = Vec::new();
    let mut scanned = 0;
    for v in sorted {
        if v.dim() != ambient {
            return Err(LatticeError::DimensionMismatch {
                expected: ambient,
                found: v.dim(),
            });
        }
        scanned += 1;
        if u.extend(v) {
            minima_sq.push(v.norm_sq());
            witnesses.push(v.clone());
            if u.dim() == ambient {
                break;
            }
        }
    }
    Ok(MinimaResult {
        rank: minima_sq.len(),
        minima_sq,
        witnesses,
        partial: false,
        scanned,
    })
}

/// Enumerates `S` for `basis` up to `bound_sq` and scans it. The result is
/// flagged partial when `S` spans less than the lattice.
pub fn minima_for_basis(basis: &LatticeBasis, bound_sq: Scalar, cap: usize) -> Result<MinimaResult> {
    let req = EnumerationRequest::new(basis.clone(), bound_sq)?.with_cap(cap);
    let s = enumerate_up_to(&req)?;
    let mut result = successive_minima(&s)?;
    result.partial = result.rank < basis.rank();
    Ok(result)
}

/// Brute-force reference: sort everything, keep each vector that raises the
/// rank of the kept set (rank recomputed from scratch each time).
pub fn greedy_oracle(vectors: &[LatticeVector]) -> Vec<Scalar> {
    let mut kept: Vec<LatticeVector> = Vec::new();
    for v in sort_by_norm(vectors.to_vec()) {
        kept.push(v);
        if rank(&kept) < kept.len() {
            kept.pop();
        }
    }
    kept.iter().map(LatticeVector::norm_sq).collect()
}

/// The three quantities of Minkowski's second theorem,
/// `2^d/d! vol L ≤ λ₁⋯λ_d vol B_d ≤ 2^d vol L`, as natural logarithms.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinkowskiTerms {
    pub ln_lower: f64,
    pub ln_product: f64,
    pub ln_upper: f64,
}

impl MinkowskiTerms {
    pub fn holds(&self, rel_tol: f64) -> bool {
        let slack = rel_tol.ln_1p();
        self.ln_lower - self.ln_product <= slack && self.ln_product - self.ln_upper <= slack
    }
}

fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        x.to_f64().expect("fits in f64").ln()
    } else {
        let shift = bits - 900;
        let top: BigInt = x >> shift;
        top.to_f64().expect("fits in f64").ln() + shift as f64 * std::f64::consts::LN_2
    }
}

fn ln_rational(x: &Scalar) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// `ln Γ(d/2 + 1)`.
fn ln_gamma_half_plus_one(d: usize) -> f64 {
    let (mut g, mut x) = if d % 2 == 0 {
        (0.0, 1.0)
    } else {
        (0.5 * PI.ln(), 0.5)
    };
    let target = d as f64 / 2.0 + 1.0;
    while x < target - 0.25 {
        g += f64::ln(x);
        x += 1.0;
    }
    g
}

/// Volume of the `d`-dimensional unit ball, `π^{d/2} / Γ(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> f64 {
    (d as f64 / 2.0 * PI.ln() - ln_gamma_half_plus_one(d)).exp()
}

pub fn minkowski_terms(basis: &LatticeBasis, result: &MinimaResult) -> Result<MinkowskiTerms> {
    let d = basis.rank();
    if d != result.rank || d == 0 {
        return Err(LatticeError::RankMismatch {
            basis: d,
            result: result.rank,
        });
    }
    let ln_vol = 0.5 * ln_rational(&basis.volume_sq());
    let ln_lambdas: f64 = result.minima_sq.iter().map(|m| 0.5 * ln_rational(m)).sum();
    let ln_ball = d as f64 / 2.0 * PI.ln() - ln_gamma_half_plus_one(d);
    let ln_two_d = d as f64 * std::f64::consts::LN_2;
    let ln_fact: f64 = (2..=d).map(|k| (k as f64).ln()).sum();
    Ok(MinkowskiTerms {
        ln_lower: ln_two_d - ln_fact + ln_vol,
        ln_product: ln_lambdas + ln_ball,
        ln_upper: ln_two_d + ln_vol,
    })
}

/// Both Minkowski inequalities, within relative tolerance `1e-9`.
pub fn minkowski_check(basis: &LatticeBasis, result: &MinimaResult) -> Result<bool> {
    Ok(minkowski_terms(basis, result)?.holds(1e-9))
}
