//! Residues modulo the Mersenne prime `2^61 - 1`.
//!
//! Reducing a polynomial identity modulo a prime commutes with evaluation as
//! long as every denominator is invertible and the formal degrees survive.
//! A nonzero residue then proves the exact value is nonzero; a zero residue
//! proves nothing and callers fall back to exact arithmetic.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::scalar::Rational;

pub(crate) const P: u64 = (1 << 61) - 1;

fn mul(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn add(a: u64, b: u64) -> u64 {
    (a + b) % P
}

fn sub(a: u64, b: u64) -> u64 {
    (a + P - b) % P
}

fn pow(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, a);
        }
        a = mul(a, a);
        e >>= 1;
    }
    r
}

fn inv(a: u64) -> u64 {
    pow(a, P - 2)
}

fn int_mod(v: &BigInt) -> u64 {
    v.mod_floor(&BigInt::from(P)).to_u64().expect("residue fits")
}

/// Residue of `p/q`, or `None` when `q` vanishes modulo the prime.
pub(crate) fn reduce(r: &Rational) -> Option<u64> {
    let d = int_mod(r.denom());
    if d == 0 {
        return None;
    }
    Some(mul(int_mod(r.numer()), inv(d)))
}

pub(crate) fn reduce_matrix(m: &[Rational]) -> Option<Vec<u64>> {
    m.iter().map(reduce).collect()
}

/// Characteristic polynomial (ascending, monic) by the trace recursion.
pub(crate) fn char_poly(a: &[u64], n: usize) -> Vec<u64> {
    let mut c = vec![0u64; n + 1];
    c[n] = 1;
    let mut mk = vec![0u64; n * n];
    let mut am = vec![0u64; n * n];
    for k in 1..=n {
        for i in 0..n {
            mk[i * n + i] = add(mk[i * n + i], c[n - k + 1]);
        }
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0u128;
                for l in 0..n {
                    acc += a[i * n + l] as u128 * mk[l * n + j] as u128;
                    if acc >= 1 << 126 {
                        acc %= P as u128;
                    }
                }
                am[i * n + j] = (acc % P as u128) as u64;
            }
        }
        let trace = (0..n).fold(0, |t, i| add(t, am[i * n + i]));
        c[n - k] = sub(0, mul(trace, inv(k as u64)));
        core::mem::swap(&mut mk, &mut am);
    }
    c
}

fn trim(mut p: Vec<u64>) -> Vec<u64> {
    while p.last() == Some(&0) {
        p.pop();
    }
    p
}

fn rem(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    let lead_inv = inv(b[db]);
    while r.len() > db {
        let top = r.len() - 1;
        let f = mul(r[top], lead_inv);
        if f != 0 {
            for (t, &bv) in b.iter().enumerate() {
                let idx = top - db + t;
                r[idx] = sub(r[idx], mul(f, bv));
            }
        }
        r.pop();
        r = trim(r);
    }
    trim(r)
}

/// Resultant of two polynomials whose leading coefficients are nonzero,
/// by the Euclidean recursion
/// `Res(A, B) = (-1)^(deg A deg B) lc(B)^(deg A - deg R) Res(B, R)`.
pub(crate) fn resultant(a: &[u64], b: &[u64]) -> u64 {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    assert!(!a.is_empty() && !b.is_empty());
    let mut acc = 1u64;
    loop {
        let (m, n) = (a.len() - 1, b.len() - 1);
        if m == 0 {
            return mul(acc, pow(a[0], n as u64));
        }
        if n == 0 {
            return mul(acc, pow(b[0], m as u64));
        }
        let r = rem(&a, &b);
        if r.is_empty() {
            return 0;
        }
        let deg_r = r.len() - 1;
        if (m * n) % 2 == 1 {
            acc = sub(0, acc);
        }
        acc = mul(acc, pow(b[n], (m - deg_r) as u64));
        a = b;
        b = r;
    }
}

pub(crate) fn derivative(p: &[u64]) -> Vec<u64> {
    trim(p.iter().enumerate().skip(1).map(|(k, &c)| mul(c, k as u64)).collect())
}

pub(crate) fn is_zero_residue(v: u64) -> bool {
    v.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::{self, Polynomial};
    use crate::scalar::int;

    fn lift(p: &[i64]) -> Vec<u64> {
        p.iter().map(|&c| reduce(&int(c)).unwrap()).collect()
    }

    #[test]
    fn resultant_agrees_with_sylvester() {
        let cases: [(&[i64], &[i64]); 5] = [
            (&[-1, 1], &[-2, 1]),
            (&[2, -3, 1], &[-1, 1]),
            (&[0, 3, -4, 1], &[3, -8, 3]),
            (&[5, 0, -7, 2, 1], &[1, 4, -1]),
            (&[3], &[2, -3, 1]),
        ];
        for (a, b) in cases {
            let exact = poly::sylvester_resultant(&Polynomial::from_integers(a), &Polynomial::from_integers(b))
                .unwrap();
            assert_eq!(Some(resultant(&lift(a), &lift(b))), reduce(&exact), "{a:?} {b:?}");
        }
    }

    #[test]
    fn char_poly_agrees() {
        let m = [1, -1, 0, -1, 2, -1, 0, -1, 1];
        let rm: Vec<_> = m.iter().map(|&v| int(v)).collect();
        let exact = poly::char_poly(&rm, 3);
        let fast = char_poly(&reduce_matrix(&rm).unwrap(), 3);
        let lifted: Vec<u64> = exact.coeffs().iter().map(|c| reduce(c).unwrap()).collect();
        assert_eq!(trim(fast), lifted);
    }
}
