//! Recognizing algebraic numbers of small degree and height from a complex
//! approximation by integer-relation search (LLL) followed by exact checks.

use num_complex::Complex64;

use super::{height, poly, AlgebraicNumber, HEIGHT_GUARD};
use crate::error::{Error, Result};

/// LLL reduction of the rows of `basis` in place (`delta` in `(1/4, 1)`).
/// Size reduction uses integer multipliers, so integral coordinates stay
/// integral.
pub fn lll_reduce(basis: &mut [Vec<f64>], delta: f64) {
    let n = basis.len();
    if n < 2 {
        return;
    }
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let gram_schmidt = |basis: &[Vec<f64>]| {
        let mut star: Vec<Vec<f64>> = Vec::with_capacity(n);
        let mut mu = vec![vec![0.0; n]; n];
        let mut norms = vec![0.0; n];
        for i in 0..n {
            let mut v = basis[i].clone();
            for j in 0..i {
                mu[i][j] = if norms[j] > 0.0 { dot(&basis[i], &star[j]) / norms[j] } else { 0.0 };
                for (x, s) in v.iter_mut().zip(&star[j]) {
                    *x -= mu[i][j] * s;
                }
            }
            norms[i] = dot(&v, &v);
            star.push(v);
        }
        (mu, norms)
    };
    let (mut mu, mut norms) = gram_schmidt(basis);
    let mut k = 1;
    let mut iterations = 0;
    while k < n && iterations < 100_000 {
        iterations += 1;
        for j in (0..k).rev() {
            let q = mu[k][j].round();
            if q != 0.0 {
                let bj = basis[j].clone();
                for (x, y) in basis[k].iter_mut().zip(&bj) {
                    *x -= q * y;
                }
                let (m, nrm) = gram_schmidt(basis);
                mu = m;
                norms = nrm;
            }
        }
        if norms[k] >= (delta - mu[k][k - 1] * mu[k][k - 1]) * norms[k - 1] {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            let (m, nrm) = gram_schmidt(basis);
            mu = m;
            norms = nrm;
            k = (k - 1).max(1);
        }
    }
}

/// Error assumed for a double-precision input: a few ulps of `max(1, |x|)`.
pub fn default_input_error(x: Complex64) -> f64 {
    4.0 * f64::EPSILON * x.norm().max(1.0)
}

/// Searches for an algebraic number of degree `<= d_max` and height
/// `<= h_max` within `tol` of `x`, assuming `x` is accurate to a few ulps.
/// A hit is a candidate only: finite precision cannot certify algebraicity.
pub fn detect_algebraic(x: Complex64, d_max: usize, h_max: f64, tol: f64) -> Result<Option<AlgebraicNumber>> {
    detect_algebraic_with_error(x, d_max, h_max, tol, default_input_error(x))
}

/// As [`detect_algebraic`] with an explicit error bound `err` for `x`.
pub fn detect_algebraic_with_error(
    x: Complex64,
    d_max: usize,
    h_max: f64,
    tol: f64,
    err: f64,
) -> Result<Option<AlgebraicNumber>> {
    if err > tol / 10.0 {
        return Err(Error::PrecisionTooLow { error: err, limit: tol / 10.0 });
    }
    if !(1..=3).contains(&d_max) {
        return Err(Error::InvalidInput(format!("degree bound {d_max} outside 1..=3")));
    }
    if !x.is_finite() {
        return Ok(None);
    }
    let mut best: Option<(f64, AlgebraicNumber)> = None;
    for d in 1..=d_max {
        if d == 1 && x.im.abs() > tol {
            continue;
        }
        for cand in relation_candidates(x, d, h_max, err) {
            for a in candidate_numbers(&cand, x, d_max, h_max, tol)? {
                let dist = (a.approx - x).norm();
                let better = match &best {
                    None => true,
                    Some((bd, b)) => dist < *bd || (dist == *bd && a.canonical_cmp(b).is_lt()),
                };
                if better {
                    best = Some((dist, a));
                }
            }
        }
    }
    Ok(best.map(|(_, a)| a))
}

/// Short integer vectors `c` with `sum c_i x^i` small, from an LLL-reduced
/// basis of `(e_i, K Re x^i, K Im x^i)`.
fn relation_candidates(x: Complex64, d: usize, h_max: f64, err: f64) -> Vec<Vec<i64>> {
    let scale = x.norm().max(1.0);
    let top = scale.powi(d as i32);
    let err_power = err * d as f64 * scale.powi(d as i32 - 1);
    let k = (1e-3 / err_power).clamp(1e4, 1e12).min(1e14 / top);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(d + 1);
    let mut p = Complex64::new(1.0, 0.0);
    for i in 0..=d {
        let mut row = vec![0.0; d + 3];
        row[i] = 1.0;
        row[d + 1] = k * p.re;
        row[d + 2] = k * p.im;
        basis.push(row);
        p *= x;
    }
    lll_reduce(&mut basis, 0.99);
    let coeff_cap = 2.0 * h_max.powi(d as i32) * 4.0 + 1.0;
    basis
        .iter()
        .filter_map(|row| {
            let c: Vec<i64> = row[..=d].iter().map(|v| v.round() as i64).collect();
            let ok = c.iter().any(|&a| a != 0) && c.iter().all(|&a| (a.abs() as f64) <= coeff_cap);
            ok.then_some(c)
        })
        .collect()
}

/// Irreducible factors of a candidate relation with a root within `tol` of `x`
/// and admissible degree and height.
fn candidate_numbers(c: &[i64], x: Complex64, d_max: usize, h_max: f64, tol: f64) -> Result<Vec<AlgebraicNumber>> {
    let mut f = poly::primitive(c);
    if poly::degree(&f) == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let accept = |a: AlgebraicNumber, out: &mut Vec<AlgebraicNumber>| {
        if a.degree() <= d_max && height(&a) <= h_max * (1.0 + HEIGHT_GUARD) && (a.approx - x).norm() <= tol {
            out.push(a);
        }
    };
    for (p, q) in poly::rational_roots(&f) {
        while let Some(g) = poly::divide_linear(&f, p, q) {
            f = g;
        }
        accept(AlgebraicNumber::rational(p, q)?, &mut out);
    }
    let f = poly::primitive(&f);
    if poly::degree(&f) >= 2 && poly::degree(&f) <= 3 {
        for a in AlgebraicNumber::roots_of(&f)? {
            accept(a, &mut out);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebraic::enumerate;

    #[test]
    fn lll_finds_short_vector() {
        let mut b = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0], vec![0.0, 0.0, 1.0]];
        b[0][2] = 12345.0;
        b[1][2] = 23456.0;
        lll_reduce(&mut b, 0.75);
        let shortest = b.iter().map(|r| r.iter().map(|v| v * v).sum::<f64>()).fold(f64::INFINITY, f64::min);
        assert!(shortest <= 2.0);
    }

    #[test]
    fn recognizes_rationals_and_surds() {
        let half = detect_algebraic(Complex64::new(0.5, 0.0), 1, 2.0, 1e-9).unwrap().unwrap();
        assert_eq!(half.minpoly, vec![-1, 2]);
        let s =
            detect_algebraic(Complex64::new((2f64.sqrt() * 1e11).round() / 1e11, 0.0), 2, 2.0, 1e-8).unwrap().unwrap();
        assert_eq!(s.minpoly, vec![-2, 0, 1]);
        assert!(s.approx.re > 0.0);
    }

    #[test]
    fn pi_is_not_recognized() {
        let x = Complex64::new(std::f64::consts::PI, 0.0);
        assert!(detect_algebraic(x, 2, 10.0, 1e-12).unwrap().is_none());
        // Oracle: exhaustive scan of the quadratic and linear candidate box.
        let mut closest = f64::INFINITY;
        for a in 0..=100i64 {
            for b in -200..=200i64 {
                for c in -100..=100i64 {
                    if a == 0 && b == 0 {
                        continue;
                    }
                    let roots = poly::roots_real(&[c as f64, b as f64, a as f64]).unwrap_or_default();
                    for r in roots {
                        closest = closest.min((r - x).norm());
                    }
                }
            }
        }
        assert!(closest > 1e-12, "closest root at {closest}");
    }

    #[test]
    fn precision_guard() {
        let r = detect_algebraic_with_error(Complex64::new(0.5, 0.0), 1, 2.0, 1e-9, 1e-9);
        assert!(matches!(r, Err(Error::PrecisionTooLow { .. })));
    }

    #[test]
    fn round_trips_enumerated_numbers() {
        for a in enumerate(2, 3.0).unwrap() {
            let got = detect_algebraic(a.approx, 2, 3.0, 1e-9).unwrap();
            let got = got.unwrap_or_else(|| panic!("missed {:?}", a.minpoly));
            assert_eq!((got.minpoly.clone(), got.root_index), (a.minpoly.clone(), a.root_index));
        }
    }
}
