//! Spectra of Laplacian matrices, Fiedler vectors and gap statistics.
//!
//! Eigen-indices are 0-based and ascending: index 0 is the zero eigenvalue and
//! index 1 the algebraic connectivity.

mod general;
mod symmetric;

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::laplacian::LaplacianMatrix;
use crate::{Error, Result};

/// Default relative tolerance for separating eigenvalues.
pub const TAU_GAP: f64 = 1e-8;
/// Default relative tolerance for calling a vector entry nonzero.
pub const TAU_V: f64 = 1e-8;

/// Eigenvalues with aligned eigenvector columns and scaled residuals
/// `‖Lv - λv‖ / max(1, ‖L‖)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition<T = f64> {
    pub eigenvalues: Vec<T>,
    pub eigenvectors: Vec<Vec<T>>,
    pub residuals: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapReport {
    pub min_gap: f64,
    pub scale: f64,
    pub simple: bool,
}

/// Values that can be compared for gap statistics.
pub trait SpectralValue: Copy {
    fn distance(&self, other: &Self) -> f64;
    fn modulus(&self) -> f64;
}

impl SpectralValue for f64 {
    fn distance(&self, other: &Self) -> f64 {
        libm::fabs(self - other)
    }
    fn modulus(&self) -> f64 {
        libm::fabs(*self)
    }
}

impl SpectralValue for Complex64 {
    fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }
    fn modulus(&self) -> f64 {
        self.norm()
    }
}

impl<T: SpectralValue> SpectralDecomposition<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `max(1, spectral radius)`.
    pub fn scale(&self) -> f64 {
        self.eigenvalues.iter().map(SpectralValue::modulus).fold(1.0, f64::max)
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// Number of eigenvalues within `tau * scale` of zero.
    pub fn zero_count(&self, tau: f64) -> usize {
        let cut = tau * self.scale();
        self.eigenvalues.iter().filter(|v| v.modulus() <= cut).count()
    }

    /// Distance from eigenvalue `k` to its nearest neighbour.
    pub fn isolation(&self, k: usize) -> f64 {
        let lk = self.eigenvalues[k];
        self.eigenvalues
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != k)
            .map(|(_, v)| v.distance(&lk))
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_simple_at(&self, k: usize, tau: f64) -> bool {
        self.isolation(k) > tau * self.scale()
    }
}

impl SpectralDecomposition<f64> {
    /// Eigenvector column `k`.
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.eigenvectors[k]
    }
}

/// Full decomposition of a symmetric matrix; ascending eigenvalues and
/// orthonormal eigenvectors. The eigenvalue closest to zero is reported as
/// exactly zero since the all-ones vector always lies in the kernel.
pub fn sym_spectrum(l: &LaplacianMatrix<f64>) -> Result<SpectralDecomposition<f64>> {
    if !l.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = l.n();
    let (mut values, v) = symmetric::symmetric_eigen(l.entries(), n, true)?;
    pin_zero(&mut values);
    let vectors: Vec<Vec<f64>> = (0..n).map(|k| (0..n).map(|i| v[i * n + k]).collect()).collect();
    let norm = l.matrix_norm().max(1.0);
    let residuals = values
        .iter()
        .zip(&vectors)
        .map(|(&lam, x)| {
            let r2: f64 = (0..n)
                .map(|i| {
                    let lx: f64 = l.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
                    let d = lx - lam * x[i];
                    d * d
                })
                .sum();
            libm::sqrt(r2) / norm
        })
        .collect();
    Ok(SpectralDecomposition { eigenvalues: values, eigenvectors: vectors, residuals })
}

fn pin_zero(values: &mut [f64]) {
    if let Some(k) = (0..values.len()).min_by(|&a, &b| values[a].abs().total_cmp(&values[b].abs())) {
        values[k] = 0.0;
    }
}

/// Ascending eigenvalues of a symmetric matrix without eigenvectors, with the
/// same zero pinning as [`sym_spectrum`].
pub fn sym_eigenvalues(l: &LaplacianMatrix<f64>) -> Result<Vec<f64>> {
    if !l.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let (mut values, _) = symmetric::symmetric_eigen(l.entries(), l.n(), false)?;
    pin_zero(&mut values);
    Ok(values)
}

/// Complex decomposition of an arbitrary square matrix, sorted by
/// `(real, imaginary)`.
pub fn general_spectrum(l: &LaplacianMatrix<f64>) -> Result<SpectralDecomposition<Complex64>> {
    let n = l.n();
    let (values, vectors) = general::general_eigen(l.entries(), n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        values[a].re.total_cmp(&values[b].re).then(values[a].im.total_cmp(&values[b].im))
    });
    let norm = l.matrix_norm().max(1.0);
    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    for k in order {
        let lam = values[k];
        let x = &vectors[k];
        let r2: f64 = (0..n)
            .map(|i| {
                let lx: Complex64 = l.row(i).iter().zip(x).map(|(a, b)| b * a).sum();
                (lx - x[i] * lam).norm_sqr()
            })
            .sum();
        eigenvalues.push(lam);
        eigenvectors.push(x.clone());
        residuals.push(libm::sqrt(r2) / norm);
    }
    Ok(SpectralDecomposition { eigenvalues, eigenvectors, residuals })
}

/// Smallest spacing between eigenvalues: consecutive for sorted real
/// spectra, pairwise for complex ones.
pub fn gap_report<T: SpectralValue>(s: &SpectralDecomposition<T>, tau_gap: f64) -> GapReport {
    let scale = s.scale();
    let vals = &s.eigenvalues;
    let mut min_gap = f64::INFINITY;
    for a in 0..vals.len() {
        for b in a + 1..vals.len() {
            min_gap = min_gap.min(vals[a].distance(&vals[b]));
        }
    }
    GapReport { min_gap, scale, simple: min_gap > tau_gap * scale }
}

/// Flips `v` so its first entry above `tau_v * ‖v‖∞` is positive.
pub fn canonical_sign(v: &mut [f64], tau_v: f64) {
    let inf = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if let Some(first) = v.iter().find(|x| x.abs() > tau_v * inf) {
        if *first < 0.0 {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// Eigenpair `k` of a symmetric Laplacian with a canonically signed unit
/// vector. Fails with [`Error::DegenerateLambda`] when `λ_k` is not simple.
pub fn eigenpair(l: &LaplacianMatrix<f64>, k: usize, tau_gap: f64) -> Result<(f64, Vec<f64>)> {
    let s = sym_spectrum(l)?;
    if k >= s.len() {
        return Err(Error::DimensionMismatch { expected: k + 1, found: s.len() });
    }
    if !s.is_simple_at(k, tau_gap) {
        return Err(Error::DegenerateLambda { index: k });
    }
    let mut v = s.eigenvectors[k].clone();
    canonical_sign(&mut v, TAU_V);
    Ok((s.eigenvalues[k], v))
}

/// `(λ₂, v)` with default tolerances.
pub fn fiedler(l: &LaplacianMatrix<f64>) -> Result<(f64, Vec<f64>)> {
    fiedler_with(l, TAU_GAP, TAU_V)
}

/// Algebraic connectivity and its unit eigenvector. A zero `λ₂` means the
/// graph is disconnected; a `λ₂` too close to `λ₃` yields
/// [`Error::DegenerateLambda2`] carrying the (non-canonical) computed vector.
pub fn fiedler_with(l: &LaplacianMatrix<f64>, tau_gap: f64, tau_v: f64) -> Result<(f64, Vec<f64>)> {
    if l.n() < 2 {
        return Err(Error::Disconnected);
    }
    let s = sym_spectrum(l)?;
    let cut = tau_gap * s.scale();
    let lambda2 = s.eigenvalues[1];
    if lambda2 <= cut {
        return Err(Error::Disconnected);
    }
    let mut v = s.eigenvectors[1].clone();
    if s.len() > 2 && s.eigenvalues[2] - lambda2 <= cut {
        return Err(Error::DegenerateLambda2 { lambda2, vector: v });
    }
    canonical_sign(&mut v, tau_v);
    Ok((lambda2, v))
}

/// Smallest absolute entry and the first index attaining it.
pub fn min_abs_entry(v: &[f64]) -> (f64, usize) {
    let mut best = (f64::INFINITY, 0);
    for (i, x) in v.iter().enumerate() {
        if x.abs() < best.0 {
            best = (x.abs(), i);
        }
    }
    best
}

/// Whether every entry exceeds `tau_v * ‖v‖∞` in magnitude.
pub fn all_entries_nonzero(v: &[f64], tau_v: f64) -> bool {
    let inf = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    inf > 0.0 && v.iter().all(|x| x.abs() > tau_v * inf)
}

/// Unit-weight path eigenvalues `2 - 2cos(kπ/p)` for `k = 0..p`.
pub fn path_eigenvalues(p: usize) -> Vec<f64> {
    (0..p).map(|k| 2.0 - 2.0 * libm::cos(k as f64 * PI / p as f64)).collect()
}

/// Unnormalized unit-weight path eigenvector for 0-based eigen-index `k`:
/// entry `i` (0-based) is `cos(πk(i+1)/p - πk/(2p))`.
pub fn path_eigenvector(p: usize, k: usize) -> Vec<f64> {
    let (pf, kf) = (p as f64, k as f64);
    (0..p)
        .map(|i| libm::cos(PI * kf * (i + 1) as f64 / pf - PI * kf / (2.0 * pf)))
        .collect()
}

/// First-order sensitivity of the simple eigenvalue `λ_k` to the weight of
/// the support pair `(i, j)`: `(v_i - v_j)²` for its unit eigenvector `v`.
pub fn eigenvalue_weight_derivative(
    l: &LaplacianMatrix<f64>,
    k: usize,
    pair: (usize, usize),
    tau_gap: f64,
) -> Result<f64> {
    let (i, j) = pair;
    if i >= l.n() || j >= l.n() || i == j || *l.get(i, j) == 0.0 {
        return Err(Error::SupportViolation(i, j));
    }
    let (_, v) = eigenpair(l, k, tau_gap)?;
    let d = v[i] - v[j];
    Ok(d * d)
}

/// Number of eigenvalues within `tau_gap * scale` of zero.
pub fn zero_multiplicity(l: &LaplacianMatrix<f64>, tau_gap: f64) -> Result<usize> {
    if l.is_directed() {
        Ok(general_spectrum(l)?.zero_count(tau_gap))
    } else {
        Ok(sym_spectrum(l)?.zero_count(tau_gap))
    }
}
