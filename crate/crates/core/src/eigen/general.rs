//! Dense nonsymmetric eigensolver: orthogonal reduction to Hessenberg form and
//! the Francis double-shift QR iteration, with eigenvectors recovered by back
//! substitution on the real Schur form.

#![allow(clippy::needless_range_loop)]

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::{Error, Result};

struct Sq {
    n: usize,
    a: Vec<f64>,
}

impl Index<(isize, isize)> for Sq {
    type Output = f64;
    fn index(&self, (i, j): (isize, isize)) -> &f64 {
        &self.a[i as usize * self.n + j as usize]
    }
}

impl IndexMut<(isize, isize)> for Sq {
    fn index_mut(&mut self, (i, j): (isize, isize)) -> &mut f64 {
        &mut self.a[i as usize * self.n + j as usize]
    }
}

/// Unsorted eigenvalues with unit-norm complex eigenvectors (one column per
/// eigenvalue, stored as `vectors[k]`).
pub(crate) fn general_eigen(a: &[f64], n: usize) -> Result<(Vec<Complex64>, Vec<Vec<Complex64>>)> {
    if n == 0 {
        return Ok((Vec::new(), Vec::new()));
    }
    let mut h = Sq { n, a: a.to_vec() };
    let mut v = Sq { n, a: vec![0.0; n * n] };
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    orthes(&mut h, &mut v);
    hqr2(&mut h, &mut v, &mut d, &mut e)?;

    let mut values = Vec::with_capacity(n);
    let mut vectors = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        if e[k] == 0.0 {
            values.push(Complex64::new(d[k], 0.0));
            vectors.push(normalize((0..n).map(|i| Complex64::new(v.a[i * n + k], 0.0)).collect()));
            k += 1;
        } else {
            // columns k and k + 1 hold real and imaginary parts for d[k] + i e[k]
            let col: Vec<Complex64> =
                (0..n).map(|i| Complex64::new(v.a[i * n + k], v.a[i * n + k + 1])).collect();
            values.push(Complex64::new(d[k], e[k]));
            values.push(Complex64::new(d[k + 1], e[k + 1]));
            vectors.push(normalize(col.clone()));
            vectors.push(normalize(col.into_iter().map(|z| z.conj()).collect()));
            k += 2;
        }
    }
    Ok((values, vectors))
}

fn normalize(mut v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum::<f64>());
    if norm > 0.0 {
        for z in &mut v {
            *z /= norm;
        }
    }
    v
}

fn orthes(h: &mut Sq, v: &mut Sq) {
    let n = h.n as isize;
    let low = 0isize;
    let high = n - 1;
    let mut ort = vec![0.0; h.n];

    for m in low + 1..high {
        let mut scale = 0.0;
        for i in m..=high {
            scale += libm::fabs(h[(i, m - 1)]);
        }
        if scale != 0.0 {
            let mut hh = 0.0;
            for i in (m..=high).rev() {
                ort[i as usize] = h[(i, m - 1)] / scale;
                hh += ort[i as usize] * ort[i as usize];
            }
            let mut g = libm::sqrt(hh);
            if ort[m as usize] > 0.0 {
                g = -g;
            }
            hh -= ort[m as usize] * g;
            ort[m as usize] -= g;

            for j in m..n {
                let mut f = 0.0;
                for i in (m..=high).rev() {
                    f += ort[i as usize] * h[(i, j)];
                }
                f /= hh;
                for i in m..=high {
                    h[(i, j)] -= f * ort[i as usize];
                }
            }
            for i in 0..=high {
                let mut f = 0.0;
                for j in (m..=high).rev() {
                    f += ort[j as usize] * h[(i, j)];
                }
                f /= hh;
                for j in m..=high {
                    h[(i, j)] -= f * ort[j as usize];
                }
            }
            ort[m as usize] *= scale;
            h[(m, m - 1)] = scale * g;
        }
    }

    for i in 0..n {
        for j in 0..n {
            v[(i, j)] = if i == j { 1.0 } else { 0.0 };
        }
    }
    for m in (low + 1..high).rev() {
        if h[(m, m - 1)] != 0.0 {
            for i in m + 1..=high {
                ort[i as usize] = h[(i, m - 1)];
            }
            for j in m..=high {
                let mut g = 0.0;
                for i in m..=high {
                    g += ort[i as usize] * v[(i, j)];
                }
                // two divisions avoid underflow
                g = (g / ort[m as usize]) / h[(m, m - 1)];
                for i in m..=high {
                    v[(i, j)] += g * ort[i as usize];
                }
            }
        }
    }
}

fn cdiv(xr: f64, xi: f64, yr: f64, yi: f64) -> (f64, f64) {
    if libm::fabs(yr) > libm::fabs(yi) {
        let r = yi / yr;
        let d = yr + r * yi;
        ((xr + r * xi) / d, (xi - r * xr) / d)
    } else {
        let r = yr / yi;
        let d = yi + r * yr;
        ((r * xr + xi) / d, (r * xi - xr) / d)
    }
}

fn hqr2(h: &mut Sq, v: &mut Sq, d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let nn = h.n as isize;
    let mut n = nn - 1;
    let low = 0isize;
    let high = nn - 1;
    let eps = f64::EPSILON;
    let mut exshift = 0.0;
    let (mut p, mut q, mut r, mut s, mut z) = (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    let (mut t, mut w, mut x, mut y): (f64, f64, f64, f64);
    let du = |i: isize| i as usize;

    let mut norm = 0.0;
    for i in 0..nn {
        for j in (i - 1).max(0)..nn {
            norm += libm::fabs(h[(i, j)]);
        }
    }

    let mut iter = 0usize;
    let mut total = 0usize;
    let max_total = 60 * h.n.max(1);
    while n >= low {
        let mut l = n;
        while l > low {
            s = libm::fabs(h[(l - 1, l - 1)]) + libm::fabs(h[(l, l)]);
            if s == 0.0 {
                s = norm;
            }
            if libm::fabs(h[(l, l - 1)]) < eps * s {
                break;
            }
            l -= 1;
        }

        if l == n {
            h[(n, n)] += exshift;
            d[du(n)] = h[(n, n)];
            e[du(n)] = 0.0;
            n -= 1;
            iter = 0;
        } else if l == n - 1 {
            w = h[(n, n - 1)] * h[(n - 1, n)];
            p = (h[(n - 1, n - 1)] - h[(n, n)]) / 2.0;
            q = p * p + w;
            z = libm::sqrt(libm::fabs(q));
            h[(n, n)] += exshift;
            h[(n - 1, n - 1)] += exshift;
            x = h[(n, n)];

            if q >= 0.0 {
                z = if p >= 0.0 { p + z } else { p - z };
                d[du(n - 1)] = x + z;
                d[du(n)] = d[du(n - 1)];
                if z != 0.0 {
                    d[du(n)] = x - w / z;
                }
                e[du(n - 1)] = 0.0;
                e[du(n)] = 0.0;
                x = h[(n, n - 1)];
                s = libm::fabs(x) + libm::fabs(z);
                p = x / s;
                q = z / s;
                r = libm::sqrt(p * p + q * q);
                p /= r;
                q /= r;
                for j in n - 1..nn {
                    z = h[(n - 1, j)];
                    h[(n - 1, j)] = q * z + p * h[(n, j)];
                    h[(n, j)] = q * h[(n, j)] - p * z;
                }
                for i in 0..=n {
                    z = h[(i, n - 1)];
                    h[(i, n - 1)] = q * z + p * h[(i, n)];
                    h[(i, n)] = q * h[(i, n)] - p * z;
                }
                for i in low..=high {
                    z = v[(i, n - 1)];
                    v[(i, n - 1)] = q * z + p * v[(i, n)];
                    v[(i, n)] = q * v[(i, n)] - p * z;
                }
            } else {
                d[du(n - 1)] = x + p;
                d[du(n)] = x + p;
                e[du(n - 1)] = z;
                e[du(n)] = -z;
            }
            n -= 2;
            iter = 0;
        } else {
            x = h[(n, n)];
            y = 0.0;
            w = 0.0;
            if l < n {
                y = h[(n - 1, n - 1)];
                w = h[(n, n - 1)] * h[(n - 1, n)];
            }

            // exceptional shifts
            if iter == 10 {
                exshift += x;
                for i in low..=n {
                    h[(i, i)] -= x;
                }
                s = libm::fabs(h[(n, n - 1)]) + libm::fabs(h[(n - 1, n - 2)]);
                x = 0.75 * s;
                y = x;
                w = -0.4375 * s * s;
            }
            if iter == 30 {
                s = (y - x) / 2.0;
                s = s * s + w;
                if s > 0.0 {
                    s = libm::sqrt(s);
                    if y < x {
                        s = -s;
                    }
                    s = x - w / ((y - x) / 2.0 + s);
                    for i in low..=n {
                        h[(i, i)] -= s;
                    }
                    exshift += s;
                    x = 0.964;
                    y = x;
                    w = x;
                }
            }

            iter += 1;
            total += 1;
            if total > max_total {
                return Err(Error::ConvergenceFailure { iterations: total });
            }

            let mut m = n - 2;
            while m >= l {
                z = h[(m, m)];
                r = x - z;
                s = y - z;
                p = (r * s - w) / h[(m + 1, m)] + h[(m, m + 1)];
                q = h[(m + 1, m + 1)] - z - r - s;
                r = h[(m + 2, m + 1)];
                s = libm::fabs(p) + libm::fabs(q) + libm::fabs(r);
                p /= s;
                q /= s;
                r /= s;
                if m == l {
                    break;
                }
                if libm::fabs(h[(m, m - 1)]) * (libm::fabs(q) + libm::fabs(r))
                    < eps
                        * (libm::fabs(p)
                            * (libm::fabs(h[(m - 1, m - 1)]) + libm::fabs(z) + libm::fabs(h[(m + 1, m + 1)])))
                {
                    break;
                }
                m -= 1;
            }

            for i in m + 2..=n {
                h[(i, i - 2)] = 0.0;
                if i > m + 2 {
                    h[(i, i - 3)] = 0.0;
                }
            }

            for k in m..n {
                let notlast = k != n - 1;
                if k != m {
                    p = h[(k, k - 1)];
                    q = h[(k + 1, k - 1)];
                    r = if notlast { h[(k + 2, k - 1)] } else { 0.0 };
                    x = libm::fabs(p) + libm::fabs(q) + libm::fabs(r);
                    if x == 0.0 {
                        continue;
                    }
                    p /= x;
                    q /= x;
                    r /= x;
                }
                s = libm::sqrt(p * p + q * q + r * r);
                if p < 0.0 {
                    s = -s;
                }
                if s != 0.0 {
                    if k != m {
                        h[(k, k - 1)] = -s * x;
                    } else if l != m {
                        h[(k, k - 1)] = -h[(k, k - 1)];
                    }
                    p += s;
                    x = p / s;
                    y = q / s;
                    z = r / s;
                    q /= p;
                    r /= p;

                    for j in k..nn {
                        p = h[(k, j)] + q * h[(k + 1, j)];
                        if notlast {
                            p += r * h[(k + 2, j)];
                            h[(k + 2, j)] -= p * z;
                        }
                        h[(k, j)] -= p * x;
                        h[(k + 1, j)] -= p * y;
                    }
                    for i in 0..=n.min(k + 3) {
                        p = x * h[(i, k)] + y * h[(i, k + 1)];
                        if notlast {
                            p += z * h[(i, k + 2)];
                            h[(i, k + 2)] -= p * r;
                        }
                        h[(i, k)] -= p;
                        h[(i, k + 1)] -= p * q;
                    }
                    for i in low..=high {
                        p = x * v[(i, k)] + y * v[(i, k + 1)];
                        if notlast {
                            p += z * v[(i, k + 2)];
                            v[(i, k + 2)] -= p * r;
                        }
                        v[(i, k)] -= p;
                        v[(i, k + 1)] -= p * q;
                    }
                }
            }
        }
    }

    if norm == 0.0 {
        return Ok(());
    }

    for n in (0..nn).rev() {
        p = d[du(n)];
        q = e[du(n)];

        if q == 0.0 {
            let mut l = n;
            h[(n, n)] = 1.0;
            for i in (0..n).rev() {
                w = h[(i, i)] - p;
                r = 0.0;
                for j in l..=n {
                    r += h[(i, j)] * h[(j, n)];
                }
                if e[du(i)] < 0.0 {
                    z = w;
                    s = r;
                } else {
                    l = i;
                    if e[du(i)] == 0.0 {
                        h[(i, n)] = if w != 0.0 { -r / w } else { -r / (eps * norm) };
                    } else {
                        x = h[(i, i + 1)];
                        y = h[(i + 1, i)];
                        q = (d[du(i)] - p) * (d[du(i)] - p) + e[du(i)] * e[du(i)];
                        t = (x * s - z * r) / q;
                        h[(i, n)] = t;
                        h[(i + 1, n)] = if libm::fabs(x) > libm::fabs(z) { (-r - w * t) / x } else { (-s - y * t) / z };
                    }
                    t = libm::fabs(h[(i, n)]);
                    if (eps * t) * t > 1.0 {
                        for j in i..=n {
                            h[(j, n)] /= t;
                        }
                    }
                }
            }
        } else if q < 0.0 {
            let mut l = n - 1;
            if libm::fabs(h[(n, n - 1)]) > libm::fabs(h[(n - 1, n)]) {
                h[(n - 1, n - 1)] = q / h[(n, n - 1)];
                h[(n - 1, n)] = -(h[(n, n)] - p) / h[(n, n - 1)];
            } else {
                let (cr, ci) = cdiv(0.0, -h[(n - 1, n)], h[(n - 1, n - 1)] - p, q);
                h[(n - 1, n - 1)] = cr;
                h[(n - 1, n)] = ci;
            }
            h[(n, n - 1)] = 0.0;
            h[(n, n)] = 1.0;
            for i in (0..n - 1).rev() {
                let mut ra = 0.0;
                let mut sa = 0.0;
                for j in l..=n {
                    ra += h[(i, j)] * h[(j, n - 1)];
                    sa += h[(i, j)] * h[(j, n)];
                }
                w = h[(i, i)] - p;

                if e[du(i)] < 0.0 {
                    z = w;
                    r = ra;
                    s = sa;
                } else {
                    l = i;
                    if e[du(i)] == 0.0 {
                        let (cr, ci) = cdiv(-ra, -sa, w, q);
                        h[(i, n - 1)] = cr;
                        h[(i, n)] = ci;
                    } else {
                        x = h[(i, i + 1)];
                        y = h[(i + 1, i)];
                        let mut vr = (d[du(i)] - p) * (d[du(i)] - p) + e[du(i)] * e[du(i)] - q * q;
                        let vi = (d[du(i)] - p) * 2.0 * q;
                        if vr == 0.0 && vi == 0.0 {
                            vr = eps
                                * norm
                                * (libm::fabs(w) + libm::fabs(q) + libm::fabs(x) + libm::fabs(y) + libm::fabs(z));
                        }
                        let (cr, ci) = cdiv(x * r - z * ra + q * sa, x * s - z * sa - q * ra, vr, vi);
                        h[(i, n - 1)] = cr;
                        h[(i, n)] = ci;
                        if libm::fabs(x) > libm::fabs(z) + libm::fabs(q) {
                            h[(i + 1, n - 1)] = (-ra - w * h[(i, n - 1)] + q * h[(i, n)]) / x;
                            h[(i + 1, n)] = (-sa - w * h[(i, n)] - q * h[(i, n - 1)]) / x;
                        } else {
                            let (cr, ci) = cdiv(-r - y * h[(i, n - 1)], -s - y * h[(i, n)], z, q);
                            h[(i + 1, n - 1)] = cr;
                            h[(i + 1, n)] = ci;
                        }
                    }

                    t = libm::fabs(h[(i, n - 1)]).max(libm::fabs(h[(i, n)]));
                    if (eps * t) * t > 1.0 {
                        for j in i..=n {
                            h[(j, n - 1)] /= t;
                            h[(j, n)] /= t;
                        }
                    }
                }
            }
        }
    }

    for j in (low..nn).rev() {
        for i in low..=high {
            z = 0.0;
            for k in low..=j.min(high) {
                z += v[(i, k)] * h[(k, j)];
            }
            v[(i, j)] = z;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual_ok(a: &[f64], n: usize) {
        let (vals, vecs) = general_eigen(a, n).unwrap();
        assert_eq!(vals.len(), n);
        for (lam, v) in vals.iter().zip(&vecs) {
            for i in 0..n {
                let av: Complex64 = (0..n).map(|j| v[j] * a[i * n + j]).sum();
                assert!((av - v[i] * lam).norm() < 1e-10, "{lam}");
            }
        }
    }

    #[test]
    fn rotation_has_conjugate_pair() {
        let a = [0.0, -1.0, 1.0, 0.0];
        let (vals, _) = general_eigen(&a, 2).unwrap();
        let mut ims: Vec<f64> = vals.iter().map(|z| z.im).collect();
        ims.sort_by(f64::total_cmp);
        assert!((ims[0] + 1.0).abs() < 1e-14 && (ims[1] - 1.0).abs() < 1e-14);
        residual_ok(&a, 2);
    }

    #[test]
    fn assorted_residuals() {
        residual_ok(&[2.0], 1);
        residual_ok(&[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 10.0], 3);
        residual_ok(&[0.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, -1.0, 1.0], 3);
        // 4-cycle of arcs: eigenvalues 1 - i^k
        residual_ok(
            &[1.0, 0.0, 0.0, -1.0, -1.0, 1.0, 0.0, 0.0, 0.0, -1.0, 1.0, 0.0, 0.0, 0.0, -1.0, 1.0],
            4,
        );
        residual_ok(
            &[
                4.0, -1.0, 0.5, 2.0, 0.0, 3.0, -2.0, 1.0, 1.0, 1.0, -1.0, 0.0, 0.3, 0.7, 2.0, 5.0,
            ],
            4,
        );
    }
}
