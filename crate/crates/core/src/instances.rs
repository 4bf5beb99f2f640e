//! Standard lattices and seeded random instance families.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::{rank, LatticeBasis, LatticeVector};

/// `ℤⁿ` with the unit basis.
pub fn z_n(n: usize) -> LatticeBasis {
    LatticeBasis::new(n, (0..n).map(|i| LatticeVector::unit(n, i)).collect()).expect("independent")
}

/// Root lattice `A_n` inside `ℝ^{n+1}`, basis `e_i − e_{i+1}`.
pub fn a_n(n: usize) -> LatticeBasis {
    let vs = (0..n)
        .map(|i| {
            let mut c = vec![0; n + 1];
            c[i] = 1;
            c[i + 1] = -1;
            LatticeVector::from_ints(&c)
        })
        .collect();
    LatticeBasis::new(n + 1, vs).expect("independent")
}

/// Root lattice `D_n` (`n ≥ 2`), basis `e_i − e_{i+1}` for `i < n−1` and
/// `e_{n−1} + e_n`.
pub fn d_n(n: usize) -> LatticeBasis {
    assert!(n >= 2);
    let mut vs: Vec<LatticeVector> = (0..n - 1)
        .map(|i| {
            let mut c = vec![0; n];
            c[i] = 1;
            c[i + 1] = -1;
            LatticeVector::from_ints(&c)
        })
        .collect();
    let mut c = vec![0; n];
    c[n - 2] = 1;
    c[n - 1] = 1;
    vs.push(LatticeVector::from_ints(&c));
    LatticeBasis::new(n, vs).expect("independent")
}

/// Blocks placed in consecutive, disjoint coordinate ranges.
pub fn orthogonal_sum(blocks: &[LatticeBasis]) -> LatticeBasis {
    let dim: usize = blocks.iter().map(LatticeBasis::dim).sum();
    let mut vectors = Vec::new();
    let mut offset = 0;
    for b in blocks {
        for v in b.vectors() {
            let mut coords = vec![num_traits::Zero::zero(); dim];
            coords[offset..offset + b.dim()].clone_from_slice(v.coords());
            vectors.push(LatticeVector::new(coords));
        }
        offset += b.dim();
    }
    LatticeBasis::new(dim, vectors).expect("blocks are independent")
}

/// Applies one signed coordinate permutation to every vector (an isometry).
pub fn permute_coordinates<R: Rng + ?Sized>(rng: &mut R, basis: &LatticeBasis) -> LatticeBasis {
    let dim = basis.dim();
    let mut perm: Vec<usize> = (0..dim).collect();
    perm.shuffle(rng);
    let signs: Vec<bool> = (0..dim).map(|_| rng.gen()).collect();
    let vs = basis
        .vectors()
        .iter()
        .map(|v| {
            LatticeVector::new(
                (0..dim)
                    .map(|i| {
                        let c = v.coords()[perm[i]].clone();
                        if signs[i] {
                            -c
                        } else {
                            c
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    LatticeBasis::new(dim, vs).expect("isometry keeps independence")
}

/// A random nonzero integer vector with entries in `[-range, range]`.
pub fn random_nonzero<R: Rng + ?Sized>(rng: &mut R, d: usize, range: i64) -> LatticeVector {
    loop {
        let c: Vec<i64> = (0..d).map(|_| rng.gen_range(-range..=range)).collect();
        if c.iter().any(|&x| x != 0) {
            return LatticeVector::from_ints(&c);
        }
    }
}

/// `m` uniform integer generators in `[-range, range]^d`, zero rows rejected.
pub fn random_generators<R: Rng + ?Sized>(rng: &mut R, d: usize, m: usize, range: i64) -> Vec<LatticeVector> {
    (0..m).map(|_| random_nonzero(rng, d, range)).collect()
}

/// `m` generators drawn from a pool of `d + 2` random vectors: copies,
/// negations and pairwise sums, so most of them are lattice members already.
pub fn duplicate_heavy_generators<R: Rng + ?Sized>(
    rng: &mut R,
    d: usize,
    m: usize,
    range: i64,
) -> Vec<LatticeVector> {
    let pool = random_generators(rng, d, d + 2, range);
    (0..m)
        .map(|_| {
            let a = pool.choose(rng).expect("nonempty pool");
            let v = match rng.gen_range(0..3) {
                0 => a.clone(),
                1 => -a,
                _ => a + pool.choose(rng).expect("nonempty pool"),
            };
            if v.is_zero() {
                a.clone()
            } else {
                v
            }
        })
        .collect()
}

/// A random full-rank basis of a sublattice of `ℤ^d`.
pub fn random_basis<R: Rng + ?Sized>(rng: &mut R, d: usize, range: i64) -> LatticeBasis {
    loop {
        let vs = random_generators(rng, d, d, range);
        if rank(&vs) == d {
            return LatticeBasis::new(d, vs).expect("full rank");
        }
    }
}

/// A small indecomposable lattice: a scaled `ℤ`, `A₂`, `A₃`, `D₄`, or the
/// binary lattice with basis `(2,0), (1,2)` (reduced Gram `[[4,2],[2,5]]`
/// with nonzero off-diagonal, hence no orthogonal basis).
pub fn random_indecomposable_block<R: Rng + ?Sized>(rng: &mut R, max_rank: usize) -> LatticeBasis {
    loop {
        let block = match rng.gen_range(0..6) {
            0 => z_n(1),
            1 => LatticeBasis::new(1, vec![LatticeVector::from_ints(&[2])]).expect("nonzero"),
            2 => a_n(2),
            3 => a_n(3),
            4 => d_n(4),
            _ => LatticeBasis::new(
                2,
                vec![LatticeVector::from_ints(&[2, 0]), LatticeVector::from_ints(&[1, 2])],
            )
            .expect("independent"),
        };
        if block.rank() <= max_rank {
            return block;
        }
    }
}

/// An orthogonal sum of random indecomposable blocks with total rank at most
/// `max_rank`, with coordinates shuffled. Returns the lattice and the block
/// count.
pub fn random_orthogonal_sum<R: Rng + ?Sized>(rng: &mut R, max_rank: usize) -> (LatticeBasis, usize) {
    let mut blocks = Vec::new();
    let mut total = 0;
    let target = rng.gen_range(1..=max_rank);
    while total < target {
        let b = random_indecomposable_block(rng, target - total);
        total += b.rank();
        blocks.push(b);
    }
    let count = blocks.len();
    (permute_coordinates(rng, &orthogonal_sum(&blocks)), count)
}
