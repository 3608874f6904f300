//! Scalar modes for matrices: `f64` for numerics, [`Rational`] for exact work.

use core::fmt::Debug;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = num_rational::BigRational;

/// Entry type of graphs and Laplacians.
///
/// The mode is carried by the type: `LaplacianMatrix<f64>` is numeric,
/// `LaplacianMatrix<Rational>` is exact. Going from exact to real is explicit
/// through [`Scalar::to_real`]; there is no conversion the other way.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
    const EXACT: bool;

    fn to_real(&self) -> f64;

    fn abs_val(&self) -> Self;
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn to_real(&self) -> f64 {
        *self
    }

    fn abs_val(&self) -> Self {
        libm::fabs(*self)
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn to_real(&self) -> f64 {
        self.to_f64().unwrap_or_else(|| {
            if self.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            }
        })
    }

    fn abs_val(&self) -> Self {
        self.abs()
    }
}

pub fn rational(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// by continued fractions.
///
/// This is an explicit rounding step, not a conversion: the result is only
/// guaranteed to lie within `1 / (q * max_den)` of `x`.
pub fn approximate(x: f64, max_den: u64) -> Rational {
    assert!(x.is_finite(), "cannot approximate a non-finite value");
    assert!(max_den >= 1);
    let negative = x < 0.0;
    let mut rest = libm::fabs(x);
    // convergents h/k
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let max_den = max_den as i128;
    for _ in 0..64 {
        let a = libm::floor(rest);
        if a > 1e18 {
            break;
        }
        let a_int = a as i128;
        let h2 = a_int * h1 + h0;
        let k2 = a_int * k1 + k0;
        if k2 > max_den {
            // semiconvergent with the largest admissible denominator
            let t = (max_den - k0) / k1;
            let hs = t * h1 + h0;
            let ks = t * k1 + k0;
            let best = if t > 0
                && libm::fabs(hs as f64 / ks as f64 - libm::fabs(x))
                    < libm::fabs(h1 as f64 / k1 as f64 - libm::fabs(x))
            {
                (hs, ks)
            } else {
                (h1, k1)
            };
            return signed(best.0, best.1, negative);
        }
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = rest - a;
        if frac <= 0.0 || libm::fabs(h1 as f64 / k1 as f64 - libm::fabs(x)) == 0.0 {
            break;
        }
        rest = 1.0 / frac;
    }
    signed(h1, k1, negative)
}

fn signed(h: i128, k: i128, negative: bool) -> Rational {
    let r = Rational::new(BigInt::from(h), BigInt::from(k));
    if negative {
        -r
    } else {
        r
    }
}
