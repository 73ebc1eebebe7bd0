//! Integer and floating polynomial helpers. Coefficients are stored in
//! ascending order: `c[i]` multiplies `x^i`.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{Error, Result};

pub fn degree(c: &[i64]) -> usize {
    c.iter().rposition(|&a| a != 0).unwrap_or(0)
}

pub fn content(c: &[i64]) -> i64 {
    c.iter().fold(0i64, |g, &a| g.gcd(&a))
}

/// Divides out the content and makes the leading coefficient positive.
pub fn primitive(c: &[i64]) -> Vec<i64> {
    let d = degree(c);
    let mut out: Vec<i64> = c[..=d].to_vec();
    let g = content(&out);
    if g == 0 {
        return out;
    }
    let s = if out[d] < 0 { -g } else { g };
    for a in &mut out {
        *a /= s;
    }
    out
}

pub fn eval_complex(c: &[i64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a as f64)
}

pub fn eval_complex_f(c: &[f64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

pub fn eval_complex_c(c: &[Complex64], x: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &a| acc * x + a)
}

/// Value and derivative by Horner's scheme.
pub fn eval_with_derivative(c: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        dp = dp * x + p;
        p = p * x + a;
    }
    (p, dp)
}

/// Rational roots `p/q` (lowest terms, `q > 0`) of an integer polynomial.
pub fn rational_roots(c: &[i64]) -> Vec<(i64, i64)> {
    let d = degree(c);
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let low = c.iter().position(|&a| a != 0).unwrap_or(0);
    if low > 0 {
        out.push((0, 1));
    }
    let (a0, ad) = (c[low].unsigned_abs(), c[d].unsigned_abs());
    for p in divisors(a0) {
        for q in divisors(ad) {
            if p.gcd(&q) != 1 {
                continue;
            }
            for sign in [1i64, -1] {
                let (pp, qq) = (sign * p as i64, q as i64);
                if eval_rational(c, pp, qq) == 0 && !out.contains(&(pp, qq)) {
                    out.push((pp, qq));
                }
            }
        }
    }
    out
}

fn divisors(n: u64) -> Vec<u64> {
    let mut v = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            v.push(i);
            if i * i != n {
                v.push(n / i);
            }
        }
        i += 1;
    }
    v.sort_unstable();
    v
}

/// `q^deg * c(p/q)` in exact arithmetic.
pub fn eval_rational(c: &[i64], p: i64, q: i64) -> i128 {
    let d = degree(c);
    let mut acc: i128 = 0;
    let mut qpow: i128 = 1;
    let mut terms = vec![0i128; d + 1];
    for (i, t) in terms.iter_mut().enumerate().rev() {
        *t = qpow;
        if i > 0 {
            qpow *= q as i128;
        }
    }
    let mut ppow: i128 = 1;
    for i in 0..=d {
        acc += c[i] as i128 * ppow * terms[i];
        ppow *= p as i128;
    }
    acc
}

/// Exact division of `c` by the linear factor `(q x - p)`; `None` if it does not divide.
pub fn divide_linear(c: &[i64], p: i64, q: i64) -> Option<Vec<i64>> {
    let d = degree(c);
    if d == 0 {
        return None;
    }
    // c = (q x - p) * b, solve from the top.
    let mut b = vec![0i64; d];
    let mut rem: Vec<i128> = c.iter().map(|&a| a as i128).collect();
    for i in (0..d).rev() {
        let top = rem[i + 1];
        if top % q as i128 != 0 {
            return None;
        }
        let bi = top / q as i128;
        b[i] = i64::try_from(bi).ok()?;
        rem[i + 1] -= bi * q as i128;
        rem[i] += bi * p as i128;
    }
    if rem.iter().all(|&r| r == 0) {
        Some(b)
    } else {
        None
    }
}

/// Irreducibility over the rationals for degree at most 3.
pub fn is_irreducible_small(c: &[i64]) -> bool {
    let d = degree(c);
    match d {
        0 => false,
        1 => true,
        2 | 3 => rational_roots(c).is_empty(),
        _ => panic!("irreducibility test supports degree <= 3"),
    }
}

/// All complex roots of a polynomial with real coefficients, polished by
/// Newton's method on the original polynomial.
pub fn roots_real(c: &[f64]) -> Result<Vec<Complex64>> {
    let d = c.iter().rposition(|&a| a != 0.0).unwrap_or(0);
    if d == 0 {
        return Ok(Vec::new());
    }
    let cc: Vec<Complex64> = c[..=d].iter().map(|&a| Complex64::new(a, 0.0)).collect();
    if d == 1 {
        return Ok(vec![Complex64::new(-c[0] / c[1], 0.0)]);
    }
    if d == 2 {
        return Ok(quadratic_roots(c[2], c[1], c[0]));
    }
    let lead = c[d];
    let mut m = DMatrix::<f64>::zeros(d, d);
    for i in 1..d {
        m[(i, i - 1)] = 1.0;
    }
    for i in 0..d {
        m[(i, d - 1)] = -c[i] / lead;
    }
    let eig = m.complex_eigenvalues();
    let mut roots: Vec<Complex64> = eig.iter().copied().collect();
    for r in &mut roots {
        *r = polish(&cc, *r);
    }
    if roots.iter().any(|r| !r.is_finite()) {
        return Err(Error::RootFindingFailure(format!("{c:?}")));
    }
    Ok(roots)
}

/// Roots of a polynomial with complex coefficients by Aberth iteration.
pub fn roots_complex(c: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = c.iter().rposition(|a| a.norm() != 0.0).unwrap_or(0);
    if d == 0 {
        return Ok(Vec::new());
    }
    let c = &c[..=d];
    if d == 1 {
        return Ok(vec![-c[0] / c[1]]);
    }
    // Initial guesses on a circle of radius from the Cauchy bound.
    let lead = c[d].norm();
    let bound = 1.0 + c[..d].iter().map(|a| a.norm() / lead).fold(0.0, f64::max);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(bound * 0.5, 0.4 + 2.0 * std::f64::consts::PI * k as f64 / d as f64))
        .collect();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let (p, dp) = eval_with_derivative(c, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let s: Complex64 = (0..d).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                moved = moved.max(step.norm() / z[i].norm().max(1.0));
            }
        }
        if moved < 1e-15 {
            break;
        }
    }
    for r in &mut z {
        *r = polish(c, *r);
    }
    if z.iter().any(|r| !r.is_finite()) {
        return Err(Error::RootFindingFailure("aberth iteration diverged".into()));
    }
    Ok(z)
}

fn quadratic_roots(a: f64, b: f64, c: f64) -> Vec<Complex64> {
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (b + if b >= 0.0 { s } else { -s });
        if q == 0.0 {
            return vec![Complex64::new(0.0, 0.0); 2];
        }
        vec![Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn polish(c: &[Complex64], mut x: Complex64) -> Complex64 {
    for _ in 0..8 {
        let (p, dp) = eval_with_derivative(c, x);
        if dp.norm() == 0.0 {
            break;
        }
        let step = p / dp;
        if !step.is_finite() {
            break;
        }
        let next = x - step;
        if eval_with_derivative(c, next).0.norm() > p.norm() {
            break;
        }
        x = next;
        if step.norm() <= 1e-17 * x.norm().max(1e-300) {
            break;
        }
    }
    x
}

/// Mahler measure `|a_d| prod max(1, |r_i|)` of an integer polynomial.
pub fn mahler_measure(c: &[i64]) -> Result<f64> {
    let d = degree(c);
    if d == 0 {
        return Ok(c[0].unsigned_abs() as f64);
    }
    if d == 1 {
        return Ok(c[0].unsigned_abs().max(c[1].unsigned_abs()) as f64);
    }
    let f: Vec<f64> = c[..=d].iter().map(|&a| a as f64).collect();
    Ok(mahler_from_roots(c[d], &roots_real(&f)?))
}

pub fn mahler_from_roots(lead: i64, roots: &[Complex64]) -> f64 {
    roots.iter().fold(lead.unsigned_abs() as f64, |m, r| m * r.norm().max(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_and_content() {
        assert_eq!(primitive(&[4, -6, -2]), vec![-2, 3, 1]);
        assert_eq!(content(&[4, -6, -2]), 2);
        assert_eq!(degree(&[1, 0, 0]), 0);
    }

    #[test]
    fn rational_root_search() {
        // 6x^2 - 5x + 1 = (2x - 1)(3x - 1)
        let mut r = rational_roots(&[1, -5, 6]);
        r.sort();
        assert_eq!(r, vec![(1, 2), (1, 3)]);
        assert!(rational_roots(&[-2, 0, 1]).is_empty());
        assert_eq!(rational_roots(&[0, 0, 1]), vec![(0, 1)]);
        assert_eq!(divide_linear(&[1, -5, 6], 1, 2), Some(vec![-1, 3]));
        assert_eq!(divide_linear(&[-2, 0, 1], 1, 1), None);
    }

    #[test]
    fn roots_of_cubic_and_mahler() {
        // (x - 2)(x^2 + 1) = x^3 - 2x^2 + x - 2
        let r = roots_real(&[-2.0, 1.0, -2.0, 1.0]).unwrap();
        let mut norms: Vec<f64> = r.iter().map(|z| z.norm()).collect();
        norms.sort_by(f64::total_cmp);
        assert!((norms[0] - 1.0).abs() < 1e-12 && (norms[2] - 2.0).abs() < 1e-12);
        assert!((mahler_measure(&[-2, 1, -2, 1]).unwrap() - 2.0).abs() < 1e-12);
        assert!((mahler_measure(&[-2, 0, 1]).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(mahler_measure(&[-1, 3]).unwrap(), 3.0);
    }

    #[test]
    fn complex_roots_by_aberth() {
        let roots = [Complex64::new(1.0, 2.0), Complex64::new(-0.5, 0.0), Complex64::new(0.0, -3.0)];
        // Expand the product.
        let mut c = vec![Complex64::new(1.0, 0.0)];
        for r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); c.len() + 1];
            for (i, a) in c.iter().enumerate() {
                next[i + 1] += a;
                next[i] -= a * r;
            }
            c = next;
        }
        let found = roots_complex(&c).unwrap();
        for r in roots {
            assert!(found.iter().any(|f| (f - r).norm() < 1e-12));
        }
    }
}
