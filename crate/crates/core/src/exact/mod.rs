//! Exact verdicts from characteristic polynomials, discriminants and
//! resultants over the rationals.

mod modp;
mod poly;

use alloc::format;
use alloc::vec::Vec;
use core::hash::Hasher;

use fnv::FnvHasher;
use num_traits::Zero;

pub use poly::{
    bareiss_determinant, char_poly, determinant, discriminant, polynomial_divide_by_x, sylvester_matrix,
    sylvester_resultant, Polynomial,
};

use crate::laplacian::LaplacianMatrix;
use crate::scalar::Rational;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertificateKind {
    Simplicity,
    SubgraphDisjoint,
}

impl CertificateKind {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Simplicity => "simplicity",
            Self::SubgraphDisjoint => "subgraph-disjoint",
        }
    }
}

/// An exact quantity whose vanishing decides a spectral property.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub value: Rational,
    pub verdict: bool,
    /// FNV-1a hash of the kind, the dropped node and the matrix entries.
    pub context: u64,
}

fn context_hash(kind: CertificateKind, l: &LaplacianMatrix<Rational>, drop: Option<usize>) -> u64 {
    let mut h = FnvHasher::default();
    h.write(kind.name().as_bytes());
    h.write(format!("|n={}|drop={:?}|", l.n(), drop).as_bytes());
    for v in l.entries() {
        h.write(format!("{v},").as_bytes());
    }
    h.finish()
}

pub fn laplacian_char_poly(l: &LaplacianMatrix<Rational>) -> Polynomial {
    char_poly(l.entries(), l.n())
}

/// `Discr(χ_L)`; the verdict is true exactly when every eigenvalue is simple.
pub fn simplicity_certificate(l: &LaplacianMatrix<Rational>) -> Certificate {
    let chi = laplacian_char_poly(l);
    let value = discriminant(&chi).expect("characteristic polynomials are monic");
    Certificate {
        kind: CertificateKind::Simplicity,
        verdict: !value.is_zero(),
        value,
        context: context_hash(CertificateKind::Simplicity, l, None),
    }
}

/// `Res(χ_{L'}/X, χ_L/X)` where `L'` is the Laplacian of the subgraph induced
/// by every node except `drop` (degrees recomputed). The verdict is true
/// exactly when the two spectra meet only at zero, counted once each.
pub fn subgraph_disjoint_certificate(l: &LaplacianMatrix<Rational>, drop: usize) -> Result<Certificate> {
    let (p, q) = quotient_pair(l, drop)?;
    let value = sylvester_resultant(&p, &q)?;
    Ok(Certificate {
        kind: CertificateKind::SubgraphDisjoint,
        verdict: !value.is_zero(),
        value,
        context: context_hash(CertificateKind::SubgraphDisjoint, l, Some(drop)),
    })
}

fn quotient_pair(l: &LaplacianMatrix<Rational>, drop: usize) -> Result<(Polynomial, Polynomial)> {
    if l.is_directed() {
        return Err(Error::NotSymmetric);
    }
    let sub = l.induced_without(drop)?;
    let p = laplacian_char_poly(&sub).divide_by_x()?;
    let q = laplacian_char_poly(l).divide_by_x()?;
    Ok((p, q))
}

fn modp_char_poly(m: &[Rational], n: usize) -> Option<Vec<u64>> {
    Some(modp::char_poly(&modp::reduce_matrix(m)?, n))
}

/// Same verdict as [`simplicity_certificate`]; a nonzero modular
/// discriminant settles it without big-integer work.
pub fn is_simple_exact(l: &LaplacianMatrix<Rational>) -> bool {
    let n = l.n();
    if n <= 1 {
        return true;
    }
    if let Some(chi) = modp_char_poly(l.entries(), n) {
        // monic of degree n and n < p, so the derivative keeps its degree
        let r = modp::resultant(&chi, &modp::derivative(&chi));
        if !modp::is_zero_residue(r) {
            return true;
        }
    }
    simplicity_certificate(l).verdict
}

/// Same verdict as [`subgraph_disjoint_certificate`] with a modular fast path.
pub fn is_subgraph_disjoint_exact(l: &LaplacianMatrix<Rational>, drop: usize) -> Result<bool> {
    let n = l.n();
    let sub = l.induced_without(drop)?;
    if let (Some(a), Some(b)) = (modp_char_poly(sub.entries(), n - 1), modp_char_poly(l.entries(), n)) {
        if a[0] == 0 && b[0] == 0 {
            let r = modp::resultant(&a[1..], &b[1..]);
            if !modp::is_zero_residue(r) {
                return Ok(true);
            }
        }
    }
    Ok(subgraph_disjoint_certificate(l, drop)?.verdict)
}

/// Whether some eigenvector of `L` has an exactly zero entry at `node`,
/// assuming a simple spectrum.
///
/// For a simple eigenvalue `λ` with unit eigenvector `v`, the `(i, i)` entry
/// of `adj(λI - L)` equals `c·v_i²` with `c ≠ 0`, and also equals
/// `χ_{L(i|i)}(λ)`. So `v_i = 0` for some eigenvector exactly when `χ_L` and
/// the characteristic polynomial of the principal minor share a root.
pub fn eigenvector_zero_at(l: &LaplacianMatrix<Rational>, node: usize) -> bool {
    let reduced = modp::reduce_matrix(l.entries()).map(|m| {
        let chi = modp::char_poly(&m, l.n());
        (m, chi)
    });
    zero_at(l, node, reduced.as_ref())
}

fn zero_at(l: &LaplacianMatrix<Rational>, node: usize, reduced: Option<&(Vec<u64>, Vec<u64>)>) -> bool {
    let n = l.n();
    if n <= 1 {
        return false;
    }
    if let Some((m, chi)) = reduced {
        let minor: Vec<u64> = (0..n * n)
            .filter(|&k| k / n != node && k % n != node)
            .map(|k| m[k])
            .collect();
        if !modp::is_zero_residue(modp::resultant(chi, &modp::char_poly(&minor, n - 1))) {
            return false;
        }
    }
    let a = char_poly(l.entries(), n);
    let b = char_poly(&l.principal_minor(node), n - 1);
    sylvester_resultant(&a, &b).map(|r| r.is_zero()).unwrap_or(true)
}

/// First node at which some eigenvector vanishes exactly, if any.
pub fn first_eigenbasis_zero(l: &LaplacianMatrix<Rational>) -> Option<usize> {
    let reduced = modp::reduce_matrix(l.entries()).map(|m| {
        let chi = modp::char_poly(&m, l.n());
        (m, chi)
    });
    (0..l.n()).find(|&i| zero_at(l, i, reduced.as_ref()))
}
