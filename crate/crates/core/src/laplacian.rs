//! Laplacian matrices and same-support (structural) perturbations.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;

use crate::graph::{Digraph, WeightedGraph};
use crate::scalar::{approximate, Rational, Scalar};
use crate::{Error, Result};

/// Dense zero-row-sum matrix.
///
/// Undirected matrices are symmetric. Directed matrices follow the in-arc
/// convention: an arc `u -> v` of weight `w` contributes `-w` at `(v, u)` and
/// `+w` at `(v, v)`, so row `v` collects the arcs entering `v`. Under this
/// convention a diverging (out-)tree gives a lower-triangular Laplacian once
/// nodes are listed parent-before-child, and zero is a simple eigenvalue
/// exactly when some node reaches every other node.
///
/// Off-diagonal entries may become positive after a perturbation with
/// negative increments; [`LaplacianMatrix::is_valid_laplacian`] reports that.
#[derive(Debug, Clone, PartialEq)]
pub struct LaplacianMatrix<S = f64> {
    n: usize,
    entries: Vec<S>,
    directed: bool,
}

/// Increments keyed by matrix position. Undirected keys have `i < j`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PerturbationTuple<S = f64> {
    values: BTreeMap<(usize, usize), S>,
}

impl<S: Scalar> PerturbationTuple<S> {
    pub fn new() -> Self {
        Self { values: BTreeMap::new() }
    }

    /// Inserts an undirected increment; the pair is normalised to `i < j`.
    pub fn set(&mut self, i: usize, j: usize, eps: S) {
        self.values.insert((i.min(j), i.max(j)), eps);
    }

    /// Inserts an increment for the ordered matrix position `(row, col)`.
    pub fn set_directed(&mut self, row: usize, col: usize, eps: S) {
        self.values.insert((row, col), eps);
    }

    pub fn get(&self, i: usize, j: usize) -> Option<&S> {
        self.values.get(&(i, j))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &S)> {
        self.values.iter()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.values.values().all(|v| v.is_zero())
    }

    pub fn max_abs(&self) -> S {
        self.values
            .values()
            .map(|v| v.abs_val())
            .fold(S::zero(), |a, b| if b > a { b } else { a })
    }

    /// `a * self + b * other` over the union of keys.
    pub fn combine(&self, a: &S, other: &Self, b: &S) -> Self {
        let mut values = BTreeMap::new();
        for (k, v) in &self.values {
            values.insert(*k, a.clone() * v.clone());
        }
        for (k, v) in &other.values {
            let add = b.clone() * v.clone();
            let entry = values.entry(*k).or_insert_with(S::zero);
            *entry = entry.clone() + add;
        }
        Self { values }
    }
}

impl<S: Scalar> FromIterator<((usize, usize), S)> for PerturbationTuple<S> {
    fn from_iter<T: IntoIterator<Item = ((usize, usize), S)>>(iter: T) -> Self {
        Self { values: iter.into_iter().collect() }
    }
}

impl<S: Scalar> LaplacianMatrix<S> {
    /// `L = D - W` of an undirected graph.
    pub fn from_graph(g: &WeightedGraph<S>) -> Self {
        let n = g.n();
        let mut entries = vec![S::zero(); n * n];
        for e in g.edges() {
            entries[e.i * n + e.j] = -e.w.clone();
            entries[e.j * n + e.i] = -e.w.clone();
            entries[e.i * n + e.i] = entries[e.i * n + e.i].clone() + e.w.clone();
            entries[e.j * n + e.j] = entries[e.j * n + e.j].clone() + e.w.clone();
        }
        Self { n, entries, directed: false }
    }

    /// Laplacian of a digraph under the in-arc convention.
    pub fn from_digraph(g: &Digraph<S>) -> Self {
        let n = g.n();
        let mut entries = vec![S::zero(); n * n];
        for a in g.arcs() {
            let (u, v) = (a.i, a.j);
            entries[v * n + u] = -a.w.clone();
            entries[v * n + v] = entries[v * n + v].clone() + a.w.clone();
        }
        Self { n, entries, directed: true }
    }

    /// Wraps a row-major matrix after checking zero row sums (and symmetry
    /// when undirected).
    pub fn from_entries(n: usize, entries: Vec<S>, directed: bool) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch { expected: n * n, found: entries.len() });
        }
        let m = Self { n, entries, directed };
        if !directed && !m.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        if !m.has_zero_row_sums() {
            return Err(Error::InvalidGraph("rows do not sum to zero".into()));
        }
        Ok(m)
    }

    pub fn zeros(n: usize, directed: bool) -> Self {
        Self { n, entries: vec![S::zero(); n * n], directed }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[S] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn has_zero_row_sums(&self) -> bool {
        let scale = self.max_abs_real();
        (0..self.n).all(|i| {
            let sum = self.row(i).iter().cloned().fold(S::zero(), |a, b| a + b);
            if S::EXACT {
                sum.is_zero()
            } else {
                libm::fabs(sum.to_real()) <= 1e-12 * scale.max(1.0) * self.n as f64
            }
        })
    }

    /// Off-diagonal entries are all non-positive.
    pub fn is_valid_laplacian(&self) -> bool {
        self.off_diagonal().all(|(_, _, v)| *v <= S::zero())
    }

    fn off_diagonal(&self) -> impl Iterator<Item = (usize, usize, &S)> + '_ {
        let n = self.n;
        self.entries
            .iter()
            .enumerate()
            .filter(move |(k, _)| k / n != k % n)
            .map(move |(k, v)| (k / n, k % n, v))
    }

    /// Nonzero off-diagonal positions: `(i, j)` with `i < j` when undirected,
    /// every ordered position when directed.
    pub fn support(&self) -> Vec<(usize, usize)> {
        self.off_diagonal()
            .filter(|&(i, j, v)| !v.is_zero() && (self.directed || i < j))
            .map(|(i, j, _)| (i, j))
            .collect()
    }

    pub fn support_equal(&self, other: &Self) -> bool {
        self.n == other.n && self.support() == other.support()
    }

    /// Maximum absolute entry.
    pub fn matrix_norm(&self) -> S {
        self.entries
            .iter()
            .map(|v| v.abs_val())
            .fold(S::zero(), |a, b| if b > a { b } else { a })
    }

    fn max_abs_real(&self) -> f64 {
        self.matrix_norm().to_real()
    }

    /// Largest number of support pairs in a single row.
    pub fn max_support_degree(&self) -> usize {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| j != i && !self.get(i, j).is_zero()).count())
            .max()
            .unwrap_or(0)
    }

    fn check_keys(&self, e: &PerturbationTuple<S>) -> Result<()> {
        for (&(i, j), _) in e.iter() {
            let inside = i < self.n
                && j < self.n
                && i != j
                && (self.directed || i < j)
                && !self.get(i, j).is_zero();
            if !inside {
                return Err(Error::SupportViolation(i, j));
            }
        }
        Ok(())
    }

    /// The matrix `L(E)`: `-eps` on each support position named in `e`,
    /// mirrored when undirected, diagonal completing zero row sums. Entries
    /// off the support stay exactly zero.
    pub fn structural_perturbation(&self, e: &PerturbationTuple<S>) -> Result<Self> {
        self.check_keys(e)?;
        let n = self.n;
        let mut entries = vec![S::zero(); n * n];
        for (&(i, j), eps) in e.iter() {
            entries[i * n + j] = -eps.clone();
            entries[i * n + i] = entries[i * n + i].clone() + eps.clone();
            if !self.directed {
                entries[j * n + i] = -eps.clone();
                entries[j * n + j] = entries[j * n + j].clone() + eps.clone();
            }
        }
        Ok(Self { n, entries, directed: self.directed })
    }

    /// `L + L(E)`.
    pub fn apply_perturbation(&self, e: &PerturbationTuple<S>) -> Result<Self> {
        let delta = self.structural_perturbation(e)?;
        Ok(self.add(&delta))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            directed: self.directed || other.directed,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix sizes differ");
        Self {
            n: self.n,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
            directed: self.directed || other.directed,
        }
    }

    pub fn scale(&self, t: &S) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().map(|a| t.clone() * a.clone()).collect(),
            directed: self.directed,
        }
    }

    pub fn to_real(&self) -> LaplacianMatrix<f64> {
        LaplacianMatrix {
            n: self.n,
            entries: self.entries.iter().map(Scalar::to_real).collect(),
            directed: self.directed,
        }
    }

    /// The undirected graph with weights `-L[i][j]` on the support.
    pub fn to_graph(&self) -> Result<WeightedGraph<S>> {
        if self.directed {
            return Err(Error::NotSymmetric);
        }
        WeightedGraph::new(
            self.n,
            self.support().into_iter().map(|(i, j)| (i, j, -self.get(i, j).clone())),
        )
    }

    /// The digraph with arc `col -> row` of weight `-L[row][col]`.
    pub fn to_digraph(&self) -> Result<Digraph<S>> {
        Digraph::new(
            self.n,
            self.support()
                .into_iter()
                .flat_map(|(i, j)| {
                    if self.directed {
                        vec![(j, i, -self.get(i, j).clone())]
                    } else {
                        vec![(j, i, -self.get(i, j).clone()), (i, j, -self.get(i, j).clone())]
                    }
                }),
        )
    }

    /// Laplacian of the subgraph induced by every node except `drop`. Degrees
    /// are recomputed without the dropped node's edges.
    pub fn induced_without(&self, drop: usize) -> Result<Self> {
        let n = self.n;
        if drop >= n || n == 1 {
            return Err(Error::InvalidGraph("cannot drop node".into()));
        }
        let keep: Vec<usize> = (0..n).filter(|&v| v != drop).collect();
        let m = n - 1;
        let mut entries = vec![S::zero(); m * m];
        for (a, &i) in keep.iter().enumerate() {
            let mut diag = S::zero();
            for (b, &j) in keep.iter().enumerate() {
                if a != b {
                    let v = self.get(i, j).clone();
                    diag = diag - v.clone();
                    entries[a * m + b] = v;
                }
            }
            entries[a * m + a] = diag;
        }
        Ok(Self { n: m, entries, directed: self.directed })
    }

    /// Principal submatrix with row and column `k` removed.
    pub fn principal_minor(&self, k: usize) -> Vec<S> {
        let n = self.n;
        let mut out = Vec::with_capacity((n - 1) * (n - 1));
        for i in (0..n).filter(|&i| i != k) {
            for j in (0..n).filter(|&j| j != k) {
                out.push(self.get(i, j).clone());
            }
        }
        out
    }
}

impl LaplacianMatrix<f64> {
    /// Rounds every off-diagonal entry to the best rational with denominator
    /// at most `max_den` and rebuilds the diagonal exactly.
    pub fn rationalize(&self, max_den: u64) -> LaplacianMatrix<Rational> {
        let n = self.n;
        let mut entries = vec![Rational::from_integer(BigInt::from(0)); n * n];
        for i in 0..n {
            let mut diag = Rational::from_integer(BigInt::from(0));
            for j in 0..n {
                if i == j {
                    continue;
                }
                let v = *self.get(i, j);
                let r = if !self.directed && j < i {
                    entries[j * n + i].clone()
                } else if v == 0.0 {
                    Rational::from_integer(BigInt::from(0))
                } else {
                    approximate(v, max_den)
                };
                diag -= r.clone();
                entries[i * n + j] = r;
            }
            entries[i * n + i] = diag;
        }
        LaplacianMatrix { n, entries, directed: self.directed }
    }
}

pub fn laplacian<S: Scalar>(g: &WeightedGraph<S>) -> LaplacianMatrix<S> {
    LaplacianMatrix::from_graph(g)
}

pub fn digraph_laplacian<S: Scalar>(g: &Digraph<S>) -> LaplacianMatrix<S> {
    LaplacianMatrix::from_digraph(g)
}
