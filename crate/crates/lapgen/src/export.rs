//! Matrix Market coordinate export of graph Laplacians.
//!
//! Undirected graphs give a `symmetric` file holding the lower triangle;
//! digraphs give a `general` file. Entries are listed column by column.
//! Rationals with a terminating decimal expansion are written exactly. Any
//! other entry is written with 17 significant digits and its exact value is
//! recorded in a `% exact i j p/q` comment.

use std::fmt::Write as _;

use lapgen_core::laplacian::{digraph_laplacian, laplacian};
use lapgen_core::{LaplacianMatrix, Rational};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::format::{format_rational, GraphFile};

/// Exact decimal form of `r`, if its expansion terminates.
pub fn terminating_decimal(r: &Rational) -> Option<String> {
    let mut den = r.denom().clone();
    let (two, five) = (BigInt::from(2), BigInt::from(5));
    let (mut twos, mut fives) = (0u32, 0u32);
    while (&den % &two).is_zero() {
        den /= &two;
        twos += 1;
    }
    while (&den % &five).is_zero() {
        den /= &five;
        fives += 1;
    }
    if den != BigInt::from(1) {
        return None;
    }
    let digits = twos.max(fives);
    let scaled = r.numer().abs() * num_traits::pow(BigInt::from(10), digits as usize) / r.denom();
    let mut s = scaled.to_string();
    if digits > 0 {
        let d = digits as usize;
        if s.len() <= d {
            s = format!("{}{s}", "0".repeat(d + 1 - s.len()));
        }
        s.insert(s.len() - d, '.');
    }
    Some(if r.is_negative() { format!("-{s}") } else { s })
}

pub fn matrix_market(g: &GraphFile) -> String {
    let l: LaplacianMatrix<Rational> = match g {
        GraphFile::Undirected(g) => laplacian(g),
        GraphFile::Directed(g) => digraph_laplacian(g),
    };
    let n = l.n();
    let symmetric = !l.is_directed();
    let mut entries = Vec::new();
    for j in 0..n {
        for i in (if symmetric { j } else { 0 })..n {
            let v = l.get(i, j);
            if !v.is_zero() {
                entries.push((i, j, v));
            }
        }
    }

    let mut out = String::new();
    let kind = if symmetric { "symmetric" } else { "general" };
    let _ = writeln!(out, "%%MatrixMarket matrix coordinate real {kind}");
    for &(i, j, v) in &entries {
        if terminating_decimal(v).is_none() {
            let _ = writeln!(out, "% exact {} {} {}", i + 1, j + 1, format_rational(v));
        }
    }
    let _ = writeln!(out, "{n} {n} {}", entries.len());
    for (i, j, v) in entries {
        let text = terminating_decimal(v)
            .unwrap_or_else(|| format!("{:.16e}", v.to_f64().unwrap_or(f64::NAN)));
        let _ = writeln!(out, "{} {} {text}", i + 1, j + 1);
    }
    out
}
