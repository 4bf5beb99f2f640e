//! The `basis`, `minima` and `decompose` subcommands.
//!
//! Each command returns an [`Outcome`]: the primary report for standard
//! output, diagnostics (verification notes, timings) for standard error, and
//! the exit code. Verification only ever changes the exit code.

use std::fmt::Write as _;
use std::time::{Duration, Instant};

use lattice_incr::decompose::{decompose_in_order, graph_decomposition_oracle};
use lattice_incr::enumerate::{enumerate_up_to, first_minimum_sq, EnumerationRequest};
use lattice_incr::hnf::canonical_form;
use lattice_incr::incremental::{
    incremental_basis, max_norm_sq, theorem_bound, update_step_bound_holds,
};
use lattice_incr::linalg::{GeneratingSet, LatticeBasis, Scalar};
use lattice_incr::minima::{greedy_oracle, minkowski_terms, successive_minima};
use lattice_incr::reduction::{mlll, ReductionParams};
use lattice_incr::LatticeError;
use num_traits::{ToPrimitive, Zero};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::format::{render_rows, LatticeFile, ParseError};

pub mod exit {
    pub const OK: i32 = 0;
    pub const FAILURE: i32 = 1;
    pub const PARSE: i32 = 2;
    pub const VERIFY: i32 = 3;
    pub const BOUND: i32 = 4;
    pub const CAP: i32 = 5;
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{0}")]
    InsufficientBound(String),
    #[error("enumeration cap of {0} vectors exceeded")]
    CapExceeded(usize),
    #[error(transparent)]
    Lattice(LatticeError),
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::CapExceeded { cap } => CliError::CapExceeded(cap),
            other => CliError::Lattice(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse(_) => exit::PARSE,
            CliError::InsufficientBound(_) => exit::BOUND,
            CliError::CapExceeded(_) => exit::CAP,
            CliError::Lattice(_) => exit::FAILURE,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn failed(err: CliError) -> Self {
        Self {
            stdout: String::new(),
            stderr: format!("error: {err}\n"),
            code: err.exit_code(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceSummary {
    pub update_count: usize,
    pub bound_value: f64,
    pub bound_satisfied: bool,
}

/// Everything one command run reports.
#[derive(Clone, Debug, Default)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub payload: String,
    pub trace: Option<TraceSummary>,
    pub timings: Vec<(&'static str, Duration)>,
    pub verify_failures: Vec<String>,
    pub verify_notes: Vec<String>,
}

impl RunReport {
    fn new(command: &str, input: &str) -> Self {
        Self {
            command: command.to_string(),
            input_digest: format!("{:x}", Sha256::digest(input.as_bytes())),
            ..Default::default()
        }
    }

    fn time<T>(&mut self, phase: &'static str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push((phase, start.elapsed()));
        out
    }

    pub fn render_stdout(&self) -> String {
        let mut out = format!("command: {}\ninput_sha256: {}\n", self.command, self.input_digest);
        out.push_str(&self.payload);
        if let Some(t) = &self.trace {
            let _ = writeln!(out, "update_count: {}", t.update_count);
            let _ = writeln!(out, "theorem_bound: {:.6}", t.bound_value);
            let _ = writeln!(out, "bound_satisfied: {}", t.bound_satisfied);
        }
        out
    }

    pub fn render_stderr(&self) -> String {
        let mut out = String::new();
        for (phase, d) in &self.timings {
            let _ = writeln!(out, "time {phase}: {:.6}s", d.as_secs_f64());
        }
        for n in &self.verify_notes {
            let _ = writeln!(out, "verify: {n}");
        }
        for f in &self.verify_failures {
            let _ = writeln!(out, "verify FAILED: {f}");
        }
        out
    }

    fn into_outcome(self) -> Outcome {
        let code = if self.verify_failures.is_empty() {
            exit::OK
        } else {
            exit::VERIFY
        };
        Outcome {
            stdout: self.render_stdout(),
            stderr: self.render_stderr(),
            code,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Flags {
    pub trace: bool,
    pub verify: bool,
    pub params: ReductionParams,
}

#[derive(Clone, Debug)]
pub struct BoundArgs {
    pub bound_sq: Scalar,
    pub cap: usize,
}

fn join(values: &[Scalar]) -> String {
    values.iter().map(ToString::to_string).collect::<Vec<_>>().join(" ")
}

pub fn cmd_basis(input: &str, flags: &Flags) -> Outcome {
    run(|| basis_report(input, flags))
}

pub fn cmd_minima(input: &str, bound: &BoundArgs, flags: &Flags) -> Outcome {
    run(|| minima_report(input, bound, flags))
}

pub fn cmd_decompose(input: &str, bound: &BoundArgs, flags: &Flags) -> Outcome {
    run(|| decompose_report(input, bound, flags))
}

fn run(f: impl FnOnce() -> Result<RunReport, CliError>) -> Outcome {
    match f() {
        Ok(report) => report.into_outcome(),
        Err(e) => Outcome::failed(e),
    }
}

pub fn basis_report(input: &str, flags: &Flags) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("basis", input);
    let file = report.time("parse", || LatticeFile::parse(input))?;
    let (basis, trace) = report.time("incremental", || incremental_basis(&file.vectors, &flags.params))?;

    let mut p = String::new();
    let _ = writeln!(p, "rank: {}", basis.rank());
    let _ = writeln!(p, "volume_sq: {}", basis.volume_sq());
    let _ = writeln!(p, "basis:");
    p.push_str(&render_rows(file.dim, basis.vectors(), None));

    if flags.trace {
        let _ = writeln!(p, "trace:");
        for r in &trace.insertions {
            let _ = writeln!(
                p,
                "  insert index={} update={} rank={} volume_sq={}",
                r.index, r.was_update, r.rank_after, r.volume_sq_after
            );
        }
        let _ = writeln!(p, "membership_tests: {}", trace.membership_tests());
        if basis.is_empty() {
            report.trace = Some(TraceSummary {
                update_count: trace.update_count,
                bound_value: 0.0,
                bound_satisfied: trace.update_count == 0,
            });
        } else {
            let lambda1 = report.time("first_minimum", || first_minimum_sq(&basis))?;
            let bound_sq = max_norm_sq(&file.vectors);
            let d = basis.rank();
            report.trace = Some(TraceSummary {
                update_count: trace.update_count,
                bound_value: theorem_bound(d, &bound_sq, &lambda1),
                bound_satisfied: update_step_bound_holds(&trace, d, &bound_sq, &lambda1)?,
            });
        }
    }
    report.payload = p;

    if flags.verify {
        let ours = canonical_form(file.dim, basis.vectors())?;
        let oracle = canonical_form(file.dim, &file.vectors)?;
        if ours == oracle {
            report.verify_notes.push("basis matches the HNF of the generators".into());
        } else {
            report
                .verify_failures
                .push("basis and generators span different lattices".into());
        }
    }
    Ok(report)
}

/// Parses the input, reduces it to a basis and enumerates `S`.
fn complete_set(
    report: &mut RunReport,
    input: &str,
    bound: &BoundArgs,
    params: &ReductionParams,
) -> Result<(LatticeFile, LatticeBasis, GeneratingSet), CliError> {
    let file = report.time("parse", || LatticeFile::parse(input))?;
    let basis = mlll(&file.vectors, params)?;
    if basis.is_empty() {
        return Err(CliError::InsufficientBound("input spans the zero lattice".into()));
    }
    if bound.bound_sq <= Scalar::zero() {
        return Err(CliError::InsufficientBound("bound must be positive".into()));
    }
    let req = EnumerationRequest::new(basis.clone(), bound.bound_sq.clone())?.with_cap(bound.cap);
    let s = report.time("enumerate", || enumerate_up_to(&req))?;
    if s.is_empty() {
        return Err(CliError::InsufficientBound(format!(
            "bound below first minimum: B² = {} < λ₁² = {}",
            bound.bound_sq,
            first_minimum_sq(&basis)?
        )));
    }
    Ok((file, basis, s))
}

pub fn minima_report(input: &str, bound: &BoundArgs, flags: &Flags) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("minima", input);
    let (file, basis, s) = complete_set(&mut report, input, bound, &flags.params)?;
    let mut result = report.time("minima", || successive_minima(&s))?;
    result.partial = result.rank < basis.rank();

    let mut p = String::new();
    let _ = writeln!(p, "bound_sq: {}", bound.bound_sq);
    let _ = writeln!(p, "vectors: {}", s.len());
    let _ = writeln!(p, "rank: {}", result.rank);
    let _ = writeln!(p, "partial: {}", result.partial);
    let _ = writeln!(p, "minima_sq: {}", join(&result.minima_sq));
    let _ = writeln!(p, "witnesses:");
    p.push_str(&render_rows(file.dim, &result.witnesses, None));
    if flags.trace {
        let _ = writeln!(p, "scanned: {}", result.scanned);
    }
    report.payload = p;

    if flags.verify {
        let oracle = report.time("greedy_oracle", || greedy_oracle(s.vectors()));
        if oracle == result.minima_sq {
            report.verify_notes.push("greedy oracle agrees".into());
        } else {
            report
                .verify_failures
                .push(format!("greedy oracle gives {}", join(&oracle)));
        }
        if result.partial {
            report
                .verify_notes
                .push("Minkowski check skipped: bound does not reach every minimum".into());
        } else {
            let t = minkowski_terms(&basis, &result)?;
            let msg = format!(
                "Minkowski {:.6} <= {:.6} <= {:.6}",
                t.ln_lower.exp(),
                t.ln_product.exp(),
                t.ln_upper.exp()
            );
            if t.holds(1e-9) {
                report.verify_notes.push(msg);
            } else {
                report.verify_failures.push(msg);
            }
        }
    }
    Ok(report)
}

pub fn decompose_report(input: &str, bound: &BoundArgs, flags: &Flags) -> Result<RunReport, CliError> {
    let mut report = RunReport::new("decompose", input);
    let (file, basis, s) = complete_set(&mut report, input, bound, &flags.params)?;

    let spanned = mlll(s.vectors(), &flags.params)?;
    if canonical_form(file.dim, spanned.vectors())? != canonical_form(file.dim, basis.vectors())? {
        let msg = if spanned.rank() < basis.rank() {
            format!(
                "vectors within the bound span rank {} of {}",
                spanned.rank(),
                basis.rank()
            )
        } else {
            let index_sq = spanned.volume_sq() / basis.volume_sq();
            format!(
                "vectors within the bound generate a sublattice of index {}",
                index_sq.to_f64().unwrap_or(f64::INFINITY).sqrt().round()
            )
        };
        return Err(CliError::InsufficientBound(msg));
    }

    let (d, stats) = report.time("decompose", || {
        decompose_in_order(&s.sorted_by_norm(), &flags.params, |_| {})
    })?;

    let mut p = String::new();
    let _ = writeln!(p, "bound_sq: {}", bound.bound_sq);
    let _ = writeln!(p, "vectors: {}", s.len());
    let _ = writeln!(p, "r: {}", d.r());
    let idx: Vec<String> = d.indices().iter().map(ToString::to_string).collect();
    let _ = writeln!(p, "indices: {}", idx.join(" "));
    let ranks: Vec<String> = d.components().iter().map(|c| c.rank().to_string()).collect();
    let _ = writeln!(p, "component_ranks: {}", ranks.join(" "));
    let _ = writeln!(p, "grouped_basis:");
    let starts: Vec<usize> = d.indices().iter().map(|i| i - 1).collect();
    p.push_str(&render_rows(file.dim, d.grouped_basis(), Some(&starts)));
    if flags.trace {
        let _ = writeln!(p, "scanned: {}", stats.scanned);
        let _ = writeln!(p, "updates: {}", stats.update_count());
        let _ = writeln!(p, "merges: {}", stats.merges());
        let _ = writeln!(p, "adjacency_tests: {}", stats.adjacency_tests);
    }
    report.payload = p;

    if flags.verify {
        let oracle = report.time("graph_oracle", || graph_decomposition_oracle(&s))?;
        if oracle.canonical() == d.canonical() {
            report.verify_notes.push("graph oracle agrees".into());
        } else {
            report
                .verify_failures
                .push(format!("graph oracle finds {} components", oracle.r()));
        }
        if !d.pairwise_orthogonal() {
            report.verify_failures.push("components are not orthogonal".into());
        }
    }
    Ok(report)
}
