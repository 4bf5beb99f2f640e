//! Incremental basis construction against batch MLLL on random generators.
//!
//! Each row gets its own `ChaCha8Rng` seeded with `seed + row`, so rows are
//! reproducible one by one. Timing columns are the only nondeterministic
//! output; `timing = false` writes them as `0`.

use std::fmt::Write as _;
use std::time::Instant;

use lattice_incr::enumerate::first_minimum_sq;
use lattice_incr::incremental::{
    incremental_basis, max_norm_sq, theorem_bound, update_step_bound_holds,
};
use lattice_incr::instances::{duplicate_heavy_generators, random_generators};
use lattice_incr::reduction::{mlll, ReductionParams};
use lattice_incr::Result;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const HEADER: &str =
    "seed,d,m,update_count,theorem_bound,t_incremental,t_batch_mlll,membership_tests,bound_holds";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// Uniform entries, all-zero rows rejected.
    Uniform,
    /// Mostly repeats and short combinations of a small pool.
    Duplicates,
}

#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub dims: Vec<usize>,
    pub ms: Vec<usize>,
    pub range: i64,
    pub reps: usize,
    pub seed: u64,
    pub family: Family,
    pub timing: bool,
    pub params: ReductionParams,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            dims: vec![4],
            ms: vec![100],
            range: 10,
            reps: 20,
            seed: 0,
            family: Family::Uniform,
            timing: true,
            params: ReductionParams::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BenchRow {
    pub seed: u64,
    pub d: usize,
    pub m: usize,
    pub update_count: usize,
    pub theorem_bound: f64,
    pub t_incremental: f64,
    pub t_batch_mlll: f64,
    pub membership_tests: usize,
    pub bound_holds: bool,
}

impl BenchRow {
    pub fn to_csv(&self) -> String {
        format!(
            "{},{},{},{},{:.6},{:.6},{:.6},{},{}",
            self.seed,
            self.d,
            self.m,
            self.update_count,
            self.theorem_bound,
            self.t_incremental,
            self.t_batch_mlll,
            self.membership_tests,
            u8::from(self.bound_holds)
        )
    }
}

pub fn bench_row(seed: u64, d: usize, m: usize, config: &BenchConfig) -> Result<BenchRow> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gens = match config.family {
        Family::Uniform => random_generators(&mut rng, d, m, config.range),
        Family::Duplicates => duplicate_heavy_generators(&mut rng, d, m, config.range),
    };

    let start = Instant::now();
    let (basis, trace) = incremental_basis(&gens, &config.params)?;
    let t_incremental = start.elapsed().as_secs_f64();

    let start = Instant::now();
    let batch = mlll(&gens, &config.params)?;
    let t_batch_mlll = start.elapsed().as_secs_f64();
    debug_assert_eq!(batch.rank(), basis.rank());

    let rank = basis.rank();
    let bound_sq = max_norm_sq(&gens);
    let lambda1 = first_minimum_sq(&basis)?;
    let (t_incremental, t_batch_mlll) = if config.timing {
        (t_incremental, t_batch_mlll)
    } else {
        (0.0, 0.0)
    };
    Ok(BenchRow {
        seed,
        d,
        m,
        update_count: trace.update_count,
        theorem_bound: theorem_bound(rank, &bound_sq, &lambda1),
        t_incremental,
        t_batch_mlll,
        membership_tests: trace.membership_tests(),
        bound_holds: update_step_bound_holds(&trace, rank, &bound_sq, &lambda1)?,
    })
}

/// All rows in (d, m, rep) order.
pub fn bench_rows(config: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    let mut seed = config.seed;
    for &d in &config.dims {
        for &m in &config.ms {
            for _ in 0..config.reps {
                rows.push(bench_row(seed, d, m, config)?);
                seed = seed.wrapping_add(1);
            }
        }
    }
    Ok(rows)
}

pub fn cmd_bench(config: &BenchConfig) -> Result<String> {
    let mut out = format!("{HEADER}\n");
    for row in bench_rows(config)? {
        let _ = writeln!(out, "{}", row.to_csv());
    }
    Ok(out)
}
