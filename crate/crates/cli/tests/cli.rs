use std::io::Write;
use std::process::{Command, Output, Stdio};

use lattice_incr::linalg::{LatticeVector, Scalar};
use lattice_incr_cli::LatticeFile;
use proptest::prelude::*;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_lattice-incr"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const D4: &str = "4 4\n1 -1 0 0\n0 1 -1 0\n0 0 1 -1\n0 0 1 1\n";

#[test]
fn basis_prints_rank_and_trace() {
    let o = run(&["basis", "--trace", "--verify"], "2 3\n1 0\n0 1\n1 1\n");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    assert!(out.starts_with("command: basis\ninput_sha256: "));
    assert!(out.contains("rank: 2\n"));
    assert!(out.contains("update_count: 2\n"));
    assert!(out.contains("bound_satisfied: true\n"));
}

#[test]
fn basis_from_file_argument() {
    let dir = std::env::temp_dir().join(format!("lattice-incr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("gcd.lat");
    std::fs::write(&path, "1 2\n4\n6\n").unwrap();
    let o = run(&["basis", "--trace", path.to_str().unwrap()], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("basis:\n1 1\n2\n"));
    assert!(stdout(&o).contains("update_count: 2\n"));
    let _ = std::fs::remove_dir_all(dir);
}

#[test]
fn exit_codes() {
    let o = run(&["basis"], "3 1\n1 2 x\n");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
    assert!(stdout(&o).is_empty());

    let o = run(&["basis", "/nonexistent/lattice"], "");
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["basis", "--delta", "1/8"], "1 1\n1\n");
    assert_eq!(o.status.code(), Some(2));

    let o = run(&["minima", "--bound-sq", "3"], "2 2\n2 0\n0 2\n");
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("bound below first minimum"));

    let o = run(&["minima", "--bound-sq", "100", "--cap", "10"], "2 2\n1 0\n0 1\n");
    assert_eq!(o.status.code(), Some(5));

    let o = run(&["decompose", "--bound-sq", "3"], "2 2\n1 0\n0 2\n");
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).contains("rank 1 of 2"));

    // a bound is mandatory
    let o = run(&["minima"], "1 1\n1\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn minima_examples() {
    let o = run(&["minima", "--bound-sq", "4", "--verify"], "2 2\n1 0\n0 2\n");
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("minima_sq: 1 4\n"));
    let o = run(&["minima", "--bound", "1.5", "--verify"], D4);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("bound_sq: 9/4\n"));
    assert!(stdout(&o).contains("minima_sq: 2 2 2 2\n"));
}

#[test]
fn decompose_examples() {
    let o = run(&["decompose", "--bound-sq", "1", "--verify"], "2 2\n1 0\n0 1\n");
    assert!(stdout(&o).contains("r: 2\nindices: 1 2\n"));
    let o = run(&["decompose", "--bound-sq", "2", "--verify"], D4);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("r: 1\nindices: 1\n"));
    let zd4 = "5 5\n1 0 0 0 0\n0 1 -1 0 0\n0 0 1 -1 0\n0 0 0 1 -1\n0 0 0 1 1\n";
    let o = run(&["decompose", "--bound-sq", "2", "--verify", "--trace"], zd4);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("r: 2\nindices: 1 2\n"));
    assert!(out.contains("grouped_basis:\n5 5\n# component 1\n"));
}

#[test]
fn verify_never_changes_stdout() {
    let cases: [(&[&str], &str); 3] = [
        (&["basis", "--trace"], "3 4\n2 4 6\n1 0 1\n3 4 7\n0 2 2\n"),
        (&["minima", "--bound-sq", "4"], D4),
        (&["decompose", "--bound-sq", "2"], D4),
    ];
    for (args, input) in cases {
        let plain = run(args, input);
        let mut with = args.to_vec();
        with.push("--verify");
        let checked = run(&with, input);
        assert_eq!(plain.stdout, checked.stdout);
        assert_eq!(checked.status.code(), Some(0));
        assert!(stderr(&checked).contains("verify:"));
    }
}

#[test]
fn bench_examples() {
    let args = ["bench", "--dims", "4", "--ms", "100", "--range", "10", "--reps", "20", "--seed", "5", "--no-timing"];
    let a = run(&args, "");
    let b = run(&args, "");
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let out = stdout(&a);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 21);
    assert!(lines[0].starts_with("seed,d,m,update_count,theorem_bound,t_incremental,t_batch_mlll"));
    for l in &lines[1..] {
        let f: Vec<&str> = l.split(',').collect();
        let u: f64 = f[3].parse().unwrap();
        let bound: f64 = f[4].parse().unwrap();
        assert!(u <= bound);
        assert_eq!(f[8], "1");
    }
}

#[test]
fn update_counts_for_trivial_inputs() {
    // independent rows: every insertion is an update
    let o = run(&["basis", "--trace"], "3 3\n1 0 0\n1 2 0\n1 2 3\n");
    assert!(stdout(&o).contains("update_count: 3\n"));
    // one vector repeated
    let o = run(&["basis", "--trace"], "2 4\n3 1\n3 1\n3 1\n3 1\n");
    assert!(stdout(&o).contains("update_count: 1\n"));
}

fn rational() -> impl Strategy<Value = Scalar> {
    (-1000i64..1000, 1i64..50).prop_map(|(p, q)| Scalar::new(p.into(), q.into()))
}

proptest! {
    #[test]
    fn file_round_trip(dim in 1usize..5, rows in proptest::collection::vec(proptest::collection::vec(rational(), 4), 1..6)) {
        let vectors: Vec<LatticeVector> =
            rows.into_iter().map(|r| LatticeVector::new(r[..dim].to_vec())).collect();
        let file = LatticeFile { dim, vectors };
        let text = file.render();
        prop_assert_eq!(LatticeFile::parse(&text).unwrap(), file.clone());
        prop_assert_eq!(LatticeFile::parse(&text).unwrap().render(), text);
    }
}
