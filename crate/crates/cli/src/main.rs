use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lattice_incr::enumerate::DEFAULT_CAP;
use lattice_incr::reduction::ReductionParams;
use lattice_incr::Scalar;
use lattice_incr_cli::bench::{cmd_bench, BenchConfig, Family};
use lattice_incr_cli::format::{parse_decimal, parse_rational};
use lattice_incr_cli::{cmd_basis, cmd_decompose, cmd_minima, exit, BoundArgs, Flags, Outcome};

#[derive(Parser)]
#[command(name = "lattice-incr", version, about = "Incremental lattice algorithms")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Lattice file; `-` or omitted reads standard input.
    input: Option<PathBuf>,
    /// Print the step trace and bound check.
    #[arg(long)]
    trace: bool,
    /// Run the reference oracles; mismatches exit with code 3.
    #[arg(long)]
    verify: bool,
    /// Lovász parameter, a rational in (1/4, 1].
    #[arg(long, default_value = "3/4", value_parser = rational)]
    delta: Scalar,
}

#[derive(Args, Clone)]
struct Bound {
    /// Squared norm bound B².
    #[arg(long, value_parser = rational, conflicts_with = "bound", required_unless_present = "bound")]
    bound_sq: Option<Scalar>,
    /// Norm bound B as a decimal; squared exactly.
    #[arg(long, value_parser = decimal)]
    bound: Option<Scalar>,
    /// Maximum number of enumerated vectors.
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Uniform,
    Duplicates,
}

#[derive(Subcommand)]
enum Command {
    /// Reduce generators to a basis incrementally.
    Basis(Common),
    /// Successive minima of the lattice with the given basis.
    Minima {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bound: Bound,
    },
    /// Orthogonal decomposition into indecomposable components.
    Decompose {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        bound: Bound,
    },
    /// CSV comparison of incremental construction and batch MLLL.
    Bench {
        #[arg(long, value_delimiter = ',', default_value = "4")]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "100")]
        ms: Vec<usize>,
        /// Entries are drawn from [-range, range].
        #[arg(long, default_value_t = 10)]
        range: i64,
        #[arg(long, default_value_t = 20)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "uniform")]
        family: FamilyArg,
        /// Write 0 in the timing columns so output is byte-identical per seed.
        #[arg(long)]
        no_timing: bool,
        #[arg(long, default_value = "3/4", value_parser = rational)]
        delta: Scalar,
    },
}

fn rational(s: &str) -> Result<Scalar, String> {
    parse_rational(s).ok_or_else(|| format!("not a rational: {s:?}"))
}

fn decimal(s: &str) -> Result<Scalar, String> {
    parse_decimal(s).ok_or_else(|| format!("not a decimal: {s:?}"))
}

fn read_input(path: &Option<PathBuf>) -> Result<String, String> {
    match path {
        Some(p) if p.as_os_str() != "-" => {
            std::fs::read_to_string(p).map_err(|e| format!("{}: {e}", p.display()))
        }
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| format!("stdin: {e}"))?;
            Ok(s)
        }
    }
}

fn params(delta: Scalar) -> Result<ReductionParams, Outcome> {
    ReductionParams::new(delta).map_err(|e| Outcome {
        stdout: String::new(),
        stderr: format!("error: {e}\n"),
        code: exit::PARSE,
    })
}

fn flags(c: &Common) -> Result<Flags, Outcome> {
    Ok(Flags {
        trace: c.trace,
        verify: c.verify,
        params: params(c.delta.clone())?,
    })
}

fn bound_args(b: Bound) -> BoundArgs {
    let bound_sq = match (b.bound_sq, b.bound) {
        (Some(sq), _) => sq,
        (None, Some(x)) => &x * &x,
        (None, None) => unreachable!("clap requires one of the bounds"),
    };
    BoundArgs { bound_sq, cap: b.cap }
}

fn with_input(common: &Common, f: impl FnOnce(&str, &Flags) -> Outcome) -> Outcome {
    let flags = match flags(common) {
        Ok(f) => f,
        Err(o) => return o,
    };
    match read_input(&common.input) {
        Ok(text) => f(&text, &flags),
        Err(e) => Outcome {
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
            code: exit::PARSE,
        },
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Basis(common) => with_input(&common, cmd_basis),
        Command::Minima { common, bound } => {
            let b = bound_args(bound);
            with_input(&common, |text, f| cmd_minima(text, &b, f))
        }
        Command::Decompose { common, bound } => {
            let b = bound_args(bound);
            with_input(&common, |text, f| cmd_decompose(text, &b, f))
        }
        Command::Bench {
            dims,
            ms,
            range,
            reps,
            seed,
            family,
            no_timing,
            delta,
        } => {
            let params = match params(delta) {
                Ok(p) => p,
                Err(o) => return o,
            };
            let config = BenchConfig {
                dims,
                ms,
                range,
                reps,
                seed,
                family: match family {
                    FamilyArg::Uniform => Family::Uniform,
                    FamilyArg::Duplicates => Family::Duplicates,
                },
                timing: !no_timing,
                params,
            };
            match cmd_bench(&config) {
                Ok(csv) => Outcome {
                    stdout: csv,
                    stderr: String::new(),
                    code: exit::OK,
                },
                Err(e) => Outcome {
                    stdout: String::new(),
                    stderr: format!("error: {e}\n"),
                    code: exit::FAILURE,
                },
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            let code = if e.use_stderr() { exit::PARSE } else { exit::OK };
            return ExitCode::from(code as u8);
        }
    };
    let out = run(cli);
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}
