//! Plain-text graph files.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! 3 2
//! 1 2 1
//! 2 3 1/2
//! ```
//!
//! The header is `n m` or `n m directed`. Each of the `m` following lines is
//! `i j w` with 1-based node indices. Weights are integers, `p/q` rationals or
//! decimals such as `0.25` or `1.5e-3`; all three are read exactly.

use std::fmt::Write as _;

use lapgen_core::{Digraph, Rational, WeightedGraph};
use num_bigint::BigInt;
use num_traits::{One, Pow, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self { line, message: message.into() }
    }
}

/// Parsed file contents with exact weights.
#[derive(Debug, Clone, PartialEq)]
pub enum GraphFile {
    Undirected(WeightedGraph<Rational>),
    Directed(Digraph<Rational>),
}

impl GraphFile {
    pub fn n(&self) -> usize {
        match self {
            Self::Undirected(g) => g.n(),
            Self::Directed(g) => g.n(),
        }
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Self::Undirected(g) => g.edge_count(),
            Self::Directed(g) => g.arcs().len(),
        }
    }

    pub fn is_directed(&self) -> bool {
        matches!(self, Self::Directed(_))
    }
}

/// Largest decimal exponent accepted in a weight literal.
const MAX_EXPONENT: i64 = 4096;

/// Reads `p`, `p/q` or a decimal literal exactly.
pub fn parse_weight(s: &str) -> Option<Rational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = parse_integer(p)?;
        let q: BigInt = parse_integer(q)?;
        return (!q.is_zero()).then(|| Rational::new(p, q));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    if exponent.abs() > MAX_EXPONENT {
        return None;
    }
    let (sign, body) = match mantissa.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = body.split_once('.').unwrap_or((body, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let shift = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10);
    let value = if shift >= 0 {
        Rational::from_integer(digits * Pow::pow(&ten, shift as u64))
    } else {
        Rational::new(digits, Pow::pow(&ten, (-shift) as u64))
    };
    Some(value * Rational::from_integer(BigInt::from(sign)))
}

fn parse_integer(s: &str) -> Option<BigInt> {
    let body = s.strip_prefix(['-', '+']).unwrap_or(s);
    if body.is_empty() || !body.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn parse_index(s: &str, n: usize, line: usize) -> Result<usize, ParseError> {
    let v: usize = s.parse().map_err(|_| ParseError::new(line, format!("bad node index '{s}'")))?;
    if v == 0 || v > n {
        return Err(ParseError::new(line, format!("node index {v} out of range 1..={n}")));
    }
    Ok(v - 1)
}

pub fn parse_graph(text: &str) -> Result<GraphFile, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| ParseError::new(1, "missing header 'n m [directed]'"))?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let directed = match fields.as_slice() {
        [_, _] => false,
        [_, _, "directed"] => true,
        [_, _, "undirected"] => false,
        _ => return Err(ParseError::new(hline, format!("header must be 'n m [directed]', found '{header}'"))),
    };
    let n: usize = fields[0]
        .parse()
        .map_err(|_| ParseError::new(hline, format!("bad node count '{}'", fields[0])))?;
    let m: usize = fields[1]
        .parse()
        .map_err(|_| ParseError::new(hline, format!("bad edge count '{}'", fields[1])))?;
    if n == 0 {
        return Err(ParseError::new(hline, "graph needs at least one node"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::BTreeSet::new();
    let mut last = hline;
    for (line, body) in lines {
        last = line;
        if edges.len() == m {
            return Err(ParseError::new(line, format!("more than the {m} declared edges")));
        }
        let parts: Vec<&str> = body.split_whitespace().collect();
        let [i, j, w] = parts.as_slice() else {
            return Err(ParseError::new(line, format!("expected 'i j w', found '{body}'")));
        };
        let i = parse_index(i, n, line)?;
        let j = parse_index(j, n, line)?;
        if i == j {
            return Err(ParseError::new(line, format!("self loop at node {}", i + 1)));
        }
        let w = parse_weight(w).ok_or_else(|| ParseError::new(line, format!("bad weight '{w}'")))?;
        if !w.is_positive() {
            return Err(ParseError::new(line, "weights must be positive"));
        }
        let key = if directed { (i, j) } else { (i.min(j), i.max(j)) };
        if !seen.insert(key) {
            return Err(ParseError::new(line, format!("duplicate edge {} {}", i + 1, j + 1)));
        }
        edges.push((i, j, w));
    }
    if edges.len() != m {
        return Err(ParseError::new(last + 1, format!("header declares {m} edges but {} were found", edges.len())));
    }
    let result = if directed {
        Digraph::new(n, edges).map(GraphFile::Directed)
    } else {
        WeightedGraph::new(n, edges).map(GraphFile::Undirected)
    };
    result.map_err(|e| ParseError::new(hline, e.to_string()))
}

pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn write_edges<'a, W: 'a>(
    n: usize,
    directed: bool,
    edges: impl ExactSizeIterator<Item = (usize, usize, &'a W)>,
    fmt: impl Fn(&W) -> String,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{n} {}{}", edges.len(), if directed { " directed" } else { "" });
    for (i, j, w) in edges {
        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, fmt(w));
    }
    out
}

pub fn write_graph(g: &GraphFile) -> String {
    match g {
        GraphFile::Undirected(g) => {
            write_edges(g.n(), false, g.edges().iter().map(|e| (e.i, e.j, &e.w)), format_rational)
        }
        GraphFile::Directed(g) => write_edges(g.n(), true, g.arcs().iter().map(|e| (e.i, e.j, &e.w)), format_rational),
    }
}

/// Floating weights are written in shortest round-trip form, so reading the
/// file back gives the exact binary values.
pub fn write_real_graph(g: &WeightedGraph<f64>) -> String {
    write_edges(g.n(), false, g.edges().iter().map(|e| (e.i, e.j, &e.w)), |w| format!("{w:?}"))
}

pub fn write_real_digraph(g: &Digraph<f64>) -> String {
    write_edges(g.n(), true, g.arcs().iter().map(|e| (e.i, e.j, &e.w)), |w| format!("{w:?}"))
}
