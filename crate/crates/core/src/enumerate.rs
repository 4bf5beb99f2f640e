//! Complete generating systems `S = { v ∈ L \ {0} : |v|² ≤ B² }`.
//!
//! [`enumerate_up_to`] is a Fincke–Pohst search on the exact `LDLᵀ`
//! factorization of the Gram matrix of a reduced basis. Every coefficient
//! interval is computed with exact rational comparisons, so boundary vectors
//! are never lost. [`box_oracle`] is a plain scan over a coefficient box and
//! only serves as a cross-check.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{LatticeError, Result};
use crate::linalg::{
    floor_sqrt, solve_square, sort_by_norm, GeneratingSet, LatticeBasis, Scalar,
};
use crate::reduction::{mlll_with_stats, ReductionParams};

/// Default limit on the number of enumerated vectors.
pub const DEFAULT_CAP: usize = 1_000_000;

/// Largest coefficient box [`box_oracle`] is willing to scan.
pub const BOX_ORACLE_LIMIT: u64 = 20_000_000;

#[derive(Clone, Debug)]
pub struct EnumerationRequest {
    basis: LatticeBasis,
    bound_sq: Scalar,
    cap: usize,
}

impl EnumerationRequest {
    pub fn new(basis: LatticeBasis, bound_sq: Scalar) -> Result<Self> {
        if bound_sq <= Scalar::zero() {
            return Err(LatticeError::NonPositive("bound_sq"));
        }
        if basis.is_empty() {
            return Err(LatticeError::EmptyInput);
        }
        Ok(Self {
            basis,
            bound_sq,
            cap: DEFAULT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn basis(&self) -> &LatticeBasis {
        &self.basis
    }

    pub fn bound_sq(&self) -> &Scalar {
        &self.bound_sq
    }

    pub fn cap(&self) -> usize {
        self.cap
    }
}

/// `G = L D Lᵀ` with unit lower triangular `L` (`mu[i][j]`, `j < i`) and
/// diagonal `D` (`diag`). The Gram matrix must be positive definite.
fn ldl(gram: &[Vec<Scalar>]) -> (Vec<Vec<Scalar>>, Vec<Scalar>) {
    let n = gram.len();
    let mut mu = vec![vec![Scalar::zero(); n]; n];
    let mut diag = vec![Scalar::zero(); n];
    for i in 0..n {
        for j in 0..i {
            let mut s = gram[i][j].clone();
            for k in 0..j {
                s -= &mu[j][k] * &mu[i][k] * &diag[k];
            }
            mu[i][j] = s / &diag[j];
        }
        let mut s = gram[i][i].clone();
        for k in 0..i {
            s -= &mu[i][k] * &mu[i][k] * &diag[k];
        }
        diag[i] = s;
    }
    (mu, diag)
}

/// All integers `x` with `(x + center)² ≤ radius_sq`, as an inclusive range.
fn integer_interval(center: &Scalar, radius_sq: &Scalar) -> Option<(BigInt, BigInt)> {
    if *radius_sq < Scalar::zero() {
        return None;
    }
    let s = floor_sqrt(radius_sq);
    let neg = -center;
    let mut lo = neg.floor().to_integer() - &s - 1;
    let mut hi = neg.ceil().to_integer() + &s + 1;
    let fits = |x: &BigInt| {
        let t = Scalar::from_integer(x.clone()) + center;
        &t * &t <= *radius_sq
    };
    while lo <= hi && !fits(&lo) {
        lo += 1;
    }
    while hi >= lo && !fits(&hi) {
        hi -= 1;
    }
    (lo <= hi).then_some((lo, hi))
}

/// Coefficient vectors `x ≠ 0` with `xᵀ G x ≤ bound_sq`.
fn fincke_pohst(gram: &[Vec<Scalar>], bound_sq: &Scalar, cap: usize) -> Result<Vec<Vec<BigInt>>> {
    let n = gram.len();
    let (mu, diag) = ldl(gram);
    let mut out = Vec::new();
    let mut x = vec![BigInt::zero(); n];
    // remaining[i]: bound minus the contribution of levels above i
    let mut remaining = vec![Scalar::zero(); n + 1];
    remaining[n] = bound_sq.clone();
    let mut centers = vec![Scalar::zero(); n];
    let mut hi = vec![BigInt::zero(); n];

    let center_at = |i: usize, x: &[BigInt]| -> Scalar {
        let mut c = Scalar::zero();
        for j in i + 1..n {
            if !x[j].is_zero() {
                c += &mu[j][i] * Scalar::from_integer(x[j].clone());
            }
        }
        c
    };

    // open level n-1
    let mut level = n - 1;
    centers[level] = Scalar::zero();
    let (lo0, hi0) = integer_interval(&centers[level], &(&remaining[n] / &diag[level]))
        .expect("bound is positive");
    x[level] = lo0;
    hi[level] = hi0;

    loop {
        if x[level] > hi[level] {
            // exhausted this level
            if level == n - 1 {
                break;
            }
            level += 1;
            x[level] += 1;
            continue;
        }
        let t = Scalar::from_integer(x[level].clone()) + &centers[level];
        let rest = &remaining[level + 1] - &t * &t * &diag[level];
        if level == 0 {
            if x.iter().any(|c| !c.is_zero()) {
                if out.len() == cap {
                    return Err(LatticeError::CapExceeded { cap });
                }
                out.push(x.clone());
            }
            x[0] += 1;
            continue;
        }
        remaining[level] = rest;
        let next = level - 1;
        centers[next] = center_at(next, &x);
        match integer_interval(&centers[next], &(&remaining[level] / &diag[next])) {
            Some((l, h)) => {
                x[next] = l;
                hi[next] = h;
                level = next;
            }
            None => x[level] += 1,
        }
    }
    Ok(out)
}

/// Every nonzero lattice vector with squared norm at most the bound, sorted by
/// squared norm then coordinates. The result is flagged complete.
pub fn enumerate_up_to(req: &EnumerationRequest) -> Result<GeneratingSet> {
    let dim = req.basis.dim();
    let (reduced, _) = mlll_with_stats(dim, req.basis.vectors().to_vec(), &ReductionParams::default());
    let coeffs = fincke_pohst(reduced.gram(), &req.bound_sq, req.cap)?;
    let vectors = coeffs.iter().map(|c| reduced.combine(c)).collect();
    GeneratingSet::new(sort_by_norm(vectors), req.bound_sq.clone(), true)
}

/// `λ₁(L)²`, the squared length of a shortest nonzero vector.
pub fn first_minimum_sq(basis: &LatticeBasis) -> Result<Scalar> {
    if basis.is_empty() {
        return Err(LatticeError::EmptyInput);
    }
    let (reduced, _) = mlll_with_stats(basis.dim(), basis.vectors().to_vec(), &ReductionParams::default());
    let bound = reduced.vectors()[0].norm_sq();
    let coeffs = fincke_pohst(reduced.gram(), &bound, DEFAULT_CAP)?;
    Ok(coeffs
        .iter()
        .map(|c| reduced.combine(c).norm_sq())
        .min()
        .expect("the first basis vector is within the bound"))
}

/// Exhaustive scan of the coefficient box `|x_i|² ≤ B² (G⁻¹)_ii`, which
/// contains every coefficient vector of norm at most `B`.
pub fn box_oracle(req: &EnumerationRequest) -> Result<GeneratingSet> {
    let basis = &req.basis;
    let n = basis.rank();
    if n > 5 {
        return Err(LatticeError::OracleTooLarge(format!("rank {n} > 5")));
    }
    let mut bounds = Vec::with_capacity(n);
    let mut size: u64 = 1;
    for i in 0..n {
        let mut e = vec![Scalar::zero(); n];
        e[i] = Scalar::one();
        let col = solve_square(basis.gram(), &e).expect("basis is independent");
        let h = floor_sqrt(&(&req.bound_sq * &col[i]));
        let width: u64 = (BigInt::from(2) * &h + 1u32)
            .try_into()
            .map_err(|_| LatticeError::OracleTooLarge("coefficient box".into()))?;
        size = size.saturating_mul(width);
        bounds.push(h);
    }
    if size > BOX_ORACLE_LIMIT {
        return Err(LatticeError::OracleTooLarge(format!("box of {size} points")));
    }

    let mut x: Vec<BigInt> = bounds.iter().map(|h| -h).collect();
    let mut found = Vec::new();
    'scan: loop {
        let v = basis.combine(&x);
        let nsq = v.norm_sq();
        if !nsq.is_zero() && nsq <= req.bound_sq {
            if found.len() == req.cap {
                return Err(LatticeError::CapExceeded { cap: req.cap });
            }
            found.push(v);
        }
        for i in 0..n {
            if x[i] < bounds[i] {
                x[i] += 1;
                continue 'scan;
            }
            x[i] = -&bounds[i];
        }
        break;
    }
    GeneratingSet::new(sort_by_norm(found), req.bound_sq.clone(), true)
}
