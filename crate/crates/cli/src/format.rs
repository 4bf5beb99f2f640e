//! Plain-text lattice files.
//!
//! ```text
//! # comment
//! 2 3        <- dimension d, vector count m
//! 1 0
//! 0 1/2
//! 1 -3/4
//! ```
//!
//! Entries are integers or `p/q` rationals. Blank lines and lines starting
//! with `#` are ignored everywhere.

use std::fmt::Write as _;
use std::str::FromStr;

use lattice_incr::{LatticeVector, Scalar};
use num_bigint::BigInt;
use num_traits::{Pow, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeFile {
    pub dim: usize,
    pub vectors: Vec<LatticeVector>,
}

fn err(line: usize, message: impl Into<String>) -> ParseError {
    ParseError {
        line,
        message: message.into(),
    }
}

/// An integer or `p/q` literal.
pub fn parse_rational(token: &str) -> Option<Scalar> {
    let (p, q) = match token.split_once('/') {
        Some((p, q)) => (BigInt::from_str(p).ok()?, BigInt::from_str(q).ok()?),
        None => (BigInt::from_str(token).ok()?, BigInt::from(1)),
    };
    (!q.is_zero()).then(|| Scalar::new(p, q))
}

/// A decimal like `1.25` or `-3`, or any literal [`parse_rational`] accepts.
pub fn parse_decimal(token: &str) -> Option<Scalar> {
    if let Some(r) = parse_rational(token) {
        return Some(r);
    }
    let (int_part, frac) = token.split_once('.')?;
    if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let negative = int_part.starts_with('-');
    let digits = format!("{}{frac}", int_part.trim_start_matches(['-', '+']));
    let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits }).ok()?;
    let denom: BigInt = BigInt::from(10u32).pow(frac.len() as u32);
    let value = Scalar::new(numer, denom);
    Some(if negative { -value } else { value })
}

impl LatticeFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header \"d m\""))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        let [d, m] = fields.as_slice() else {
            return Err(err(hline, "header must be \"d m\""));
        };
        let dim: usize = d
            .parse()
            .map_err(|_| err(hline, format!("invalid dimension {d:?}")))?;
        let count: usize = m
            .parse()
            .map_err(|_| err(hline, format!("invalid vector count {m:?}")))?;
        if dim == 0 || count == 0 {
            return Err(err(hline, "dimension and vector count must be at least 1"));
        }

        let mut vectors = Vec::with_capacity(count);
        let mut last = hline;
        for (lineno, line) in lines {
            last = lineno;
            if vectors.len() == count {
                return Err(err(lineno, format!("more than {count} vectors")));
            }
            let coords = line
                .split_whitespace()
                .map(|t| parse_rational(t).ok_or_else(|| err(lineno, format!("invalid entry {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            if coords.len() != dim {
                return Err(err(lineno, format!("expected {dim} entries, found {}", coords.len())));
            }
            vectors.push(LatticeVector::new(coords));
        }
        if vectors.len() < count {
            return Err(err(last, format!("expected {count} vectors, found {}", vectors.len())));
        }
        Ok(Self { dim, vectors })
    }

    /// `d m` header followed by one vector per row.
    pub fn render(&self) -> String {
        render_rows(self.dim, &self.vectors, None)
    }
}

/// Vectors as a lattice file body. `groups` optionally inserts a
/// `# component k` comment before each group start (0-based offsets).
pub fn render_rows(dim: usize, vectors: &[LatticeVector], groups: Option<&[usize]>) -> String {
    let mut out = format!("{dim} {}\n", vectors.len());
    for (i, v) in vectors.iter().enumerate() {
        if let Some(k) = groups.and_then(|g| g.iter().position(|&s| s == i)) {
            let _ = writeln!(out, "# component {}", k + 1);
        }
        let row: Vec<String> = v.coords().iter().map(ToString::to_string).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}
