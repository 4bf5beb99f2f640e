//! Exact rational vectors, Gram matrices, determinants and lattice membership.
//!
//! Norms and volumes are always carried as squares, so every comparison made
//! anywhere in the crate is an exact rational comparison.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{LatticeError, Result};

/// Exact rational scalar, always normalized (positive denominator, lowest terms).
pub type Scalar = BigRational;

/// Integer scalar as a rational.
pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

/// `p / q` as a rational. Panics if `q == 0`.
pub fn ratio(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

/// A vector of the ambient Euclidean space with exact rational coordinates.
///
/// Ordering is lexicographic on the coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatticeVector {
    coords: Vec<Scalar>,
}

impl LatticeVector {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Self { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Self::new(coords.iter().map(|&c| int(c)).collect())
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(vec![Scalar::zero(); dim])
    }

    /// The `i`-th unit vector of `dim`-space.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zero(dim);
        v.coords[i] = Scalar::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Scalar] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<Scalar> {
        self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        Self::new(self.coords.iter().map(|c| c * s).collect())
    }

    /// `self + s * other`. Dimensions must agree.
    pub fn add_scaled(&self, s: &Scalar, other: &Self) -> Self {
        debug_assert_eq!(self.dim(), other.dim());
        Self::new(
            self.coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a + s * b)
                .collect(),
        )
    }

    /// Exact dot product.
    pub fn dot(&self, other: &Self) -> Result<Scalar> {
        check_dim(self.dim(), other.dim())?;
        Ok(dot_unchecked(&self.coords, &other.coords))
    }

    pub fn norm_sq(&self) -> Scalar {
        dot_unchecked(&self.coords, &self.coords)
    }

    /// `self` or `-self`, whichever has a positive leading nonzero coordinate.
    pub fn sign_normalized(self) -> Self {
        match self.coords.iter().find(|c| !c.is_zero()) {
            Some(c) if c.is_negative() => -&self,
            _ => self,
        }
    }

    /// Least common multiple of the coordinate denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.coords
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &LatticeVector {
    type Output = LatticeVector;
    fn add(self, rhs: Self) -> LatticeVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl Sub for &LatticeVector {
    type Output = LatticeVector;
    fn sub(self, rhs: Self) -> LatticeVector {
        debug_assert_eq!(self.dim(), rhs.dim());
        LatticeVector::new(
            self.coords
                .iter()
                .zip(&rhs.coords)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Neg for &LatticeVector {
    type Output = LatticeVector;
    fn neg(self) -> LatticeVector {
        LatticeVector::new(self.coords.iter().map(|c| -c).collect())
    }
}

fn dot_unchecked(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(LatticeError::DimensionMismatch { expected, found })
    }
}

/// Checks that every vector lives in the same space and returns its dimension.
/// `None` for an empty slice.
pub fn common_dim(vectors: &[LatticeVector]) -> Result<Option<usize>> {
    let Some(first) = vectors.first() else {
        return Ok(None);
    };
    for v in vectors {
        check_dim(first.dim(), v.dim())?;
    }
    Ok(Some(first.dim()))
}

pub fn inner_product(u: &LatticeVector, v: &LatticeVector) -> Result<Scalar> {
    u.dot(v)
}

pub fn norm_sq(v: &LatticeVector) -> Scalar {
    v.norm_sq()
}

/// Square matrix of pairwise inner products.
pub fn gram_matrix(vectors: &[LatticeVector]) -> Vec<Vec<Scalar>> {
    let n = vectors.len();
    let mut gram = vec![vec![Scalar::zero(); n]; n];
    for i in 0..n {
        for j in 0..=i {
            let g = dot_unchecked(&vectors[i].coords, &vectors[j].coords);
            gram[j][i] = g.clone();
            gram[i][j] = g;
        }
    }
    gram
}

/// Fraction-free (Bareiss) determinant of a square integer matrix.
pub fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = v / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

/// Rank of an integer matrix by fraction-free elimination.
pub fn rank_bareiss(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    let mut prev = BigInt::one();
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for i in rank + 1..rows {
            for j in c + 1..cols {
                let v = &m[i][j] * &m[rank][c] - &m[i][c] * &m[rank][j];
                m[i][j] = v / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
        if rank == rows {
            break;
        }
    }
    rank
}

/// Scales each row by the lcm of its denominators. Returns the integer rows
/// and the product of the scale factors.
fn clear_row_denominators(m: &[Vec<Scalar>]) -> (Vec<Vec<BigInt>>, BigInt) {
    let mut total = BigInt::one();
    let rows = m
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
            total *= &l;
            row.iter()
                .map(|c| c.numer() * (&l / c.denom()))
                .collect::<Vec<_>>()
        })
        .collect();
    (rows, total)
}

/// Determinant of a square rational matrix.
pub fn determinant(m: &[Vec<Scalar>]) -> Scalar {
    let (ints, scale) = clear_row_denominators(m);
    Scalar::new(det_bareiss(ints), scale)
}

/// Rank of the matrix whose rows are `vectors`.
pub fn rank(vectors: &[LatticeVector]) -> usize {
    let rows: Vec<Vec<Scalar>> = vectors.iter().map(|v| v.coords.clone()).collect();
    rank_bareiss(clear_row_denominators(&rows).0)
}

/// Solves the square system `a * x = b` exactly. `None` if `a` is singular.
pub fn solve_square(a: &[Vec<Scalar>], b: &[Scalar]) -> Option<Vec<Scalar>> {
    let n = a.len();
    let mut aug: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !aug[i][c].is_zero())?;
        aug.swap(c, p);
        let pivot = aug[c][c].clone();
        for j in c..=n {
            aug[c][j] = &aug[c][j] / &pivot;
        }
        for i in 0..n {
            if i == c || aug[i][c].is_zero() {
                continue;
            }
            let f = aug[i][c].clone();
            for j in c..=n {
                let v = &aug[c][j] * &f;
                aug[i][j] -= v;
            }
        }
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Ordered list of linearly independent vectors with its cached Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeBasis {
    dim: usize,
    vectors: Vec<LatticeVector>,
    gram: Vec<Vec<Scalar>>,
}

impl LatticeBasis {
    /// The basis of the zero lattice in `dim`-space.
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vectors: Vec::new(),
            gram: Vec::new(),
        }
    }

    /// Builds a basis, rejecting mismatched dimensions and dependent vectors.
    pub fn new(dim: usize, vectors: Vec<LatticeVector>) -> Result<Self> {
        for v in &vectors {
            check_dim(dim, v.dim())?;
        }
        let basis = Self::from_independent(dim, vectors);
        if !basis.vectors.is_empty() && basis.volume_sq().is_zero() {
            return Err(LatticeError::DependentVectors);
        }
        Ok(basis)
    }

    /// Skips the independence check. Callers guarantee independence.
    pub(crate) fn from_independent(dim: usize, vectors: Vec<LatticeVector>) -> Self {
        let gram = gram_matrix(&vectors);
        Self { dim, vectors, gram }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<LatticeVector> {
        self.vectors
    }

    pub fn gram(&self) -> &[Vec<Scalar>] {
        &self.gram
    }

    /// `det(gram)`, the squared volume of the lattice.
    pub fn volume_sq(&self) -> Scalar {
        determinant(&self.gram)
    }

    /// Rational coordinates of `v` in this basis, if `v` lies in its real span.
    pub fn solve_in_span(&self, v: &LatticeVector) -> Option<Vec<Scalar>> {
        if v.dim() != self.dim {
            return None;
        }
        if self.vectors.is_empty() {
            return v.is_zero().then(Vec::new);
        }
        let rhs: Vec<Scalar> = self
            .vectors
            .iter()
            .map(|b| dot_unchecked(&b.coords, &v.coords))
            .collect();
        let coeffs = solve_square(&self.gram, &rhs)?;
        let mut rebuilt = LatticeVector::zero(self.dim);
        for (c, b) in coeffs.iter().zip(&self.vectors) {
            rebuilt = rebuilt.add_scaled(c, b);
        }
        (rebuilt == *v).then_some(coeffs)
    }

    /// Localization: does `v` lie in the lattice spanned by this basis?
    pub fn is_member(&self, v: &LatticeVector) -> bool {
        self.solve_in_span(v)
            .is_some_and(|c| c.iter().all(|x| x.is_integer()))
    }

    /// Integer combination `Σ coeffs[i] * b_i`.
    pub fn combine(&self, coeffs: &[BigInt]) -> LatticeVector {
        let mut out = LatticeVector::zero(self.dim);
        for (c, b) in coeffs.iter().zip(&self.vectors) {
            if !c.is_zero() {
                out = out.add_scaled(&Scalar::from_integer(c.clone()), b);
            }
        }
        out
    }
}

pub fn solve_in_span(basis: &LatticeBasis, v: &LatticeVector) -> Option<Vec<Scalar>> {
    basis.solve_in_span(v)
}

pub fn is_member(basis: &LatticeBasis, v: &LatticeVector) -> bool {
    basis.is_member(v)
}

pub fn volume_sq(basis: &LatticeBasis) -> Scalar {
    basis.volume_sq()
}

/// Multiset `S` of nonzero lattice vectors with a squared norm bound `B²`.
///
/// `complete` is a claim made by the producer: the set holds every nonzero
/// vector of the generated lattice with squared norm at most `bound_sq`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingSet {
    vectors: Vec<LatticeVector>,
    bound_sq: Scalar,
    complete: bool,
}

impl GeneratingSet {
    /// Zero vectors are dropped. Any vector longer than the bound is an error.
    pub fn new(vectors: Vec<LatticeVector>, bound_sq: Scalar, complete: bool) -> Result<Self> {
        common_dim(&vectors)?;
        let vectors: Vec<_> = vectors.into_iter().filter(|v| !v.is_zero()).collect();
        if let Some(v) = vectors.iter().find(|v| v.norm_sq() > bound_sq) {
            return Err(LatticeError::ExceedsBound {
                norm_sq: Box::new(v.norm_sq()),
                bound_sq: Box::new(bound_sq),
            });
        }
        Ok(Self {
            vectors,
            bound_sq,
            complete,
        })
    }

    /// An arbitrary generator list; the bound is the largest squared norm.
    pub fn from_generators(vectors: Vec<LatticeVector>) -> Result<Self> {
        let bound_sq = vectors
            .iter()
            .map(LatticeVector::norm_sq)
            .max()
            .unwrap_or_else(Scalar::zero);
        Self::new(vectors, bound_sq, false)
    }

    pub fn vectors(&self) -> &[LatticeVector] {
        &self.vectors
    }

    pub fn bound_sq(&self) -> &Scalar {
        &self.bound_sq
    }

    pub fn is_complete(&self) -> bool {
        self.complete
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> Option<usize> {
        self.vectors.first().map(LatticeVector::dim)
    }

    /// Vectors in canonical scan order: squared norm, then coordinates.
    pub fn sorted_by_norm(&self) -> Vec<LatticeVector> {
        sort_by_norm(self.vectors.clone())
    }
}

/// Sorts by squared norm, ties broken lexicographically.
pub fn sort_by_norm(vectors: Vec<LatticeVector>) -> Vec<LatticeVector> {
    let mut keyed: Vec<(Scalar, LatticeVector)> =
        vectors.into_iter().map(|v| (v.norm_sq(), v)).collect();
    keyed.sort();
    keyed.into_iter().map(|(_, v)| v).collect()
}

/// Nearest integer, halves rounded up.
pub(crate) fn round_nearest(x: &Scalar) -> BigInt {
    (x + ratio(1, 2)).floor().to_integer()
}

/// `floor(sqrt(x))` for a nonnegative rational.
pub(crate) fn floor_sqrt(x: &Scalar) -> BigInt {
    debug_assert!(!x.is_negative());
    x.floor().to_integer().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(c: &[i64]) -> LatticeVector {
        LatticeVector::from_ints(c)
    }

    fn basis(rows: &[&[i64]]) -> LatticeBasis {
        let vs: Vec<_> = rows.iter().map(|r| v(r)).collect();
        LatticeBasis::new(rows[0].len(), vs).unwrap()
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&v(&[1, 0]), &v(&[0, 1])).unwrap(), int(0));
        assert_eq!(inner_product(&v(&[1, 1]), &v(&[1, -1])).unwrap(), int(0));
        let a = LatticeVector::new(vec![ratio(1, 2), int(3)]);
        let b = LatticeVector::new(vec![int(2), ratio(1, 3)]);
        assert_eq!(inner_product(&a, &b).unwrap(), int(2));
    }

    #[test]
    fn inner_product_dimension_mismatch() {
        let err = inner_product(&v(&[1, 0]), &v(&[1, 0, 0])).unwrap_err();
        assert!(matches!(
            err,
            LatticeError::DimensionMismatch {
                expected: 2,
                found: 3
            }
        ));
    }

    #[test]
    fn norm_sq_examples() {
        assert_eq!(norm_sq(&v(&[0, 0])), int(0));
        assert_eq!(norm_sq(&v(&[1, 1])), int(2));
        assert_eq!(
            norm_sq(&LatticeVector::new(vec![ratio(3, 2), int(2)])),
            ratio(25, 4)
        );
    }

    #[test]
    fn solve_in_span_examples() {
        assert_eq!(
            basis(&[&[1, 0], &[0, 1]]).solve_in_span(&v(&[3, -5])),
            Some(vec![int(3), int(-5)])
        );
        assert_eq!(
            basis(&[&[1, 1]]).solve_in_span(&v(&[2, 2])),
            Some(vec![int(2)])
        );
        assert_eq!(basis(&[&[1, 1]]).solve_in_span(&v(&[1, 0])), None);
    }

    #[test]
    fn membership_examples() {
        assert!(basis(&[&[1, 0], &[0, 1]]).is_member(&v(&[3, -5])));
        let b = basis(&[&[1, 1], &[1, -1]]);
        assert!(b.is_member(&v(&[2, 0])));
        assert!(!b.is_member(&v(&[1, 0])));
        assert_eq!(b.solve_in_span(&v(&[1, 0])), Some(vec![ratio(1, 2), ratio(1, 2)]));
    }

    #[test]
    fn empty_basis_membership() {
        let b = LatticeBasis::empty(3);
        assert!(b.is_member(&v(&[0, 0, 0])));
        assert!(!b.is_member(&v(&[0, 1, 0])));
        assert_eq!(b.volume_sq(), int(1));
    }

    #[test]
    fn volume_examples() {
        assert_eq!(basis(&[&[1, 0], &[0, 1]]).volume_sq(), int(1));
        assert_eq!(basis(&[&[1, 1], &[1, -1]]).volume_sq(), int(4));
        let d4 = basis(&[&[1, -1, 0, 0], &[0, 1, -1, 0], &[0, 0, 1, -1], &[0, 0, 1, 1]]);
        assert_eq!(d4.volume_sq(), int(4));
    }

    #[test]
    fn dependent_basis_rejected() {
        let err = LatticeBasis::new(2, vec![v(&[1, 2]), v(&[2, 4])]).unwrap_err();
        assert!(matches!(err, LatticeError::DependentVectors));
    }

    #[test]
    fn bareiss_matches_known_determinants() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect()
        };
        assert_eq!(det_bareiss(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(det_bareiss(m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]])), BigInt::from(6));
        assert_eq!(det_bareiss(m(&[&[0, 0, 1], &[0, 2, 0], &[3, 0, 0]])), BigInt::from(-6));
        assert_eq!(det_bareiss(m(&[&[1, 2], &[2, 4]])), BigInt::from(0));
        assert_eq!(rank_bareiss(m(&[&[1, 2, 3], &[2, 4, 6], &[0, 0, 1]])), 2);
        assert_eq!(rank_bareiss(m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn rational_determinant() {
        let m = vec![vec![ratio(1, 2), int(0)], vec![int(3), ratio(2, 3)]];
        assert_eq!(determinant(&m), ratio(1, 3));
    }

    #[test]
    fn generating_set_drops_zero_and_checks_bound() {
        let s = GeneratingSet::new(vec![v(&[0, 0]), v(&[1, 0])], int(1), true).unwrap();
        assert_eq!(s.len(), 1);
        assert!(GeneratingSet::new(vec![v(&[1, 1])], int(1), true).is_err());
    }

    #[test]
    fn floor_sqrt_is_exact() {
        assert_eq!(floor_sqrt(&ratio(9, 1)), BigInt::from(3));
        assert_eq!(floor_sqrt(&ratio(99, 10)), BigInt::from(3));
        assert_eq!(floor_sqrt(&ratio(1, 4)), BigInt::from(0));
        assert_eq!(round_nearest(&ratio(-1, 2)), BigInt::from(0));
        assert_eq!(round_nearest(&ratio(3, 2)), BigInt::from(2));
    }
}
