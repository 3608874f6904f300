use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;
use crate::{Error, Result};

/// Univariate polynomial with exact rational coefficients in ascending
/// degree. The zero polynomial has no coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(BigInt::from(c))).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * Rational::from_integer(BigInt::from(k)))
                .collect(),
        )
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::scalar::Scalar::to_real(c))
    }

    /// `P / X`, defined only when the constant coefficient is exactly zero.
    pub fn divide_by_x(&self) -> Result<Self> {
        match self.coeffs.first() {
            Some(c) if c.is_zero() => Ok(Self::new(self.coeffs[1..].to_vec())),
            _ => Err(Error::XNotARoot),
        }
    }

    /// Integer coefficients of `d * P` for the least positive `d` clearing
    /// every denominator.
    pub(crate) fn primitive_scaled(&self) -> (Vec<BigInt>, BigInt) {
        let d = self.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints = self.coeffs.iter().map(|c| c.numer() * (&d / c.denom())).collect();
        (ints, d)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            match (k, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (1, true) => write!(f, "X")?,
                (1, false) => write!(f, "{a}*X")?,
                (_, true) => write!(f, "X^{k}")?,
                (_, false) => write!(f, "{a}*X^{k}")?,
            }
        }
        Ok(())
    }
}

/// Fraction-free Gaussian elimination; every division is exact.
pub fn bareiss_determinant(mut a: Vec<BigInt>, n: usize) -> BigInt {
    assert_eq!(a.len(), n * n);
    if n == 0 {
        return BigInt::one();
    }
    let mut negate = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k * n + k].is_zero() {
            match (k + 1..n).find(|&r| !a[r * n + k].is_zero()) {
                Some(r) => {
                    for j in 0..n {
                        a.swap(k * n + j, r * n + j);
                    }
                    negate = !negate;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j];
                a[i * n + j] = v / &prev;
            }
        }
        prev = a[k * n + k].clone();
    }
    let det = a[n * n - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// Determinant of a rational matrix via Bareiss after clearing row
/// denominators.
pub fn determinant(m: &[Rational], n: usize) -> Rational {
    let mut scale = BigInt::one();
    let mut ints = Vec::with_capacity(n * n);
    for i in 0..n {
        let row = &m[i * n..(i + 1) * n];
        let d = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        ints.extend(row.iter().map(|c| c.numer() * (&d / c.denom())));
        scale *= d;
    }
    Rational::new(bareiss_determinant(ints, n), scale)
}

/// Coefficients of `det(X I - M)` by the Faddeev–LeVerrier trace recursion.
///
/// The matrix is first scaled to an integer matrix `A = sM`, for which every
/// step of the recursion divides exactly; coefficient `k` of the result is
/// then the integer coefficient divided by `s^(n-k)`.
pub fn char_poly(m: &[Rational], n: usize) -> Polynomial {
    assert_eq!(m.len(), n * n, "matrix is not square");
    let s = m.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let a: Vec<BigInt> = m.iter().map(|c| c.numer() * (&s / c.denom())).collect();

    let mut c = vec![BigInt::zero(); n + 1];
    c[n] = BigInt::one();
    let mut mk = vec![BigInt::zero(); n * n];
    let mut am = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        for i in 0..n {
            mk[i * n + i] += &c[n - k + 1];
        }
        // A M_k
        for i in 0..n {
            for j in 0..n {
                let mut acc = BigInt::zero();
                for l in 0..n {
                    let x = &a[i * n + l];
                    if !x.is_zero() {
                        acc += x * &mk[l * n + j];
                    }
                }
                am[i * n + j] = acc;
            }
        }
        let trace: BigInt = (0..n).map(|i| &am[i * n + i]).sum();
        c[n - k] = -(trace / BigInt::from(k));
        core::mem::swap(&mut mk, &mut am);
    }

    let mut power = BigInt::one();
    let mut coeffs = vec![Rational::zero(); n + 1];
    for k in (0..=n).rev() {
        coeffs[k] = Rational::new(c[k].clone(), power.clone());
        power *= &s;
    }
    Polynomial::new(coeffs)
}

/// Sylvester matrix of `P` (degree `m`) and `Q` (degree `k`): `k` shifted rows
/// of `P`'s coefficients followed by `m` shifted rows of `Q`'s, each row
/// listing coefficients from the leading one down.
pub fn sylvester_matrix(p: &Polynomial, q: &Polynomial) -> Result<(Vec<Rational>, usize)> {
    let m = p.degree().ok_or(Error::ZeroPolynomial)?;
    let k = q.degree().ok_or(Error::ZeroPolynomial)?;
    let size = m + k;
    let mut s = vec![Rational::zero(); size * size];
    for r in 0..k {
        for (t, c) in p.coeffs().iter().rev().enumerate() {
            s[r * size + r + t] = c.clone();
        }
    }
    for r in 0..m {
        for (t, c) in q.coeffs().iter().rev().enumerate() {
            s[(k + r) * size + r + t] = c.clone();
        }
    }
    Ok((s, size))
}

/// Determinant of the Sylvester matrix. With the row order above this is
/// `lc(P)^deg Q · lc(Q)^deg P · ∏ (α_i - β_j)` over the roots of `P` and `Q`.
pub fn sylvester_resultant(p: &Polynomial, q: &Polynomial) -> Result<Rational> {
    let m = p.degree().ok_or(Error::ZeroPolynomial)?;
    let k = q.degree().ok_or(Error::ZeroPolynomial)?;
    // Res(P, Q) = Res(dp P, dq Q) / (dp^k dq^m)
    let (pi, dp) = p.primitive_scaled();
    let (qi, dq) = q.primitive_scaled();
    let size = m + k;
    let mut s = vec![BigInt::zero(); size * size];
    for r in 0..k {
        for (t, c) in pi.iter().rev().enumerate() {
            s[r * size + r + t] = c.clone();
        }
    }
    for r in 0..m {
        for (t, c) in qi.iter().rev().enumerate() {
            s[(k + r) * size + r + t] = c.clone();
        }
    }
    let det = bareiss_determinant(s, size);
    let denom = num_traits::pow(dp, k) * num_traits::pow(dq, m);
    Ok(Rational::new(det, denom))
}

/// `(-1)^(d(d-1)/2) · Res(P, P') / lc(P)`. Nonzero constants have
/// discriminant 1.
pub fn discriminant(p: &Polynomial) -> Result<Rational> {
    let d = p.degree().ok_or(Error::ZeroPolynomial)?;
    if d == 0 {
        return Ok(Rational::one());
    }
    let res = sylvester_resultant(p, &p.derivative())?;
    let value = res / p.leading().expect("nonzero polynomial");
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -value } else { value })
}

pub fn polynomial_divide_by_x(p: &Polynomial) -> Result<Polynomial> {
    p.divide_by_x()
}
