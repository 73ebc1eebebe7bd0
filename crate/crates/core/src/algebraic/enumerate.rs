//! Exhaustive enumeration of algebraic numbers of bounded degree and height.
//!
//! A polynomial of degree `d` with Mahler measure `M` satisfies
//! `|a_i| <= binom(d, i) M`, so every minimal polynomial with `M <= H^d`
//! lies in a finite coefficient box. The box is walked in canonical order.

use num_complex::Complex64;
use num_integer::Integer;
use rayon::prelude::*;

use super::{poly, AlgebraicNumber, HEIGHT_GUARD};
use crate::error::{Error, Result};

/// Default cap on the number of coefficient vectors examined.
pub const DEFAULT_BOX_CAP: u64 = 2_000_000_000;

const MAX_DEGREE: usize = 3;
const BLOCK_BATCH: usize = 64;

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `floor(binom(d, i) H^d (1 + guard))` for each coefficient index.
fn coefficient_bounds(d: usize, h_max: f64) -> Vec<i64> {
    let m = h_max.powi(d as i32) * (1.0 + HEIGHT_GUARD);
    (0..=d).map(|i| (binom(d, i) * m).floor() as i64).collect()
}

/// Number of coefficient vectors examined by `enumerate(d_max, h_max)`.
pub fn box_size(d_max: usize, h_max: f64) -> f64 {
    (1..=d_max)
        .map(|d| {
            let b = coefficient_bounds(d, h_max);
            let lead = b[d] as f64;
            b[..d].iter().fold(lead, |acc, &x| acc * (2 * x + 1) as f64)
        })
        .sum()
}

fn check_args(d_max: usize, h_max: f64, cap: u64) -> Result<()> {
    if !(1..=MAX_DEGREE).contains(&d_max) {
        return Err(Error::InvalidInput(format!("degree bound {d_max} outside 1..={MAX_DEGREE}")));
    }
    if !(h_max >= 1.0 && h_max.is_finite()) {
        return Err(Error::InvalidInput(format!("height bound {h_max} must be >= 1")));
    }
    let size = box_size(d_max, h_max);
    if size > cap as f64 {
        return Err(Error::BudgetExceeded(format!("coefficient box has {size:.3e} entries, cap is {cap}")));
    }
    Ok(())
}

/// All algebraic numbers of degree `<= d_max` and height `<= h_max`, in
/// canonical order.
pub fn enumerate(d_max: usize, h_max: f64) -> Result<Vec<AlgebraicNumber>> {
    let mut out = Vec::new();
    for block in enumerate_blocks(d_max, h_max, DEFAULT_BOX_CAP)? {
        out.extend(block?);
    }
    Ok(out)
}

/// Streams the enumeration in canonical order as consecutive blocks; each
/// block shares the degree and the two leading coefficients.
pub fn enumerate_blocks(d_max: usize, h_max: f64, cap: u64) -> Result<Blocks> {
    check_args(d_max, h_max, cap)?;
    let mut prefixes = Vec::new();
    for d in 1..=d_max {
        let b = coefficient_bounds(d, h_max);
        for lead in 1..=b[d] {
            if d == 1 {
                prefixes.push((d, lead, 0));
            } else {
                for next in -b[d - 1]..=b[d - 1] {
                    prefixes.push((d, lead, next));
                }
            }
        }
    }
    Ok(Blocks { h_max, prefixes, pos: 0, ready: Vec::new().into_iter() })
}

/// Iterator over enumeration blocks.
pub struct Blocks {
    h_max: f64,
    prefixes: Vec<(usize, i64, i64)>,
    pos: usize,
    ready: std::vec::IntoIter<Result<Vec<AlgebraicNumber>>>,
}

impl Iterator for Blocks {
    type Item = Result<Vec<AlgebraicNumber>>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            if let Some(b) = self.ready.next() {
                return Some(b);
            }
            if self.pos >= self.prefixes.len() {
                return None;
            }
            let end = (self.pos + BLOCK_BATCH).min(self.prefixes.len());
            let h = self.h_max;
            let batch: Vec<_> =
                self.prefixes[self.pos..end].par_iter().map(|&(d, lead, next)| block(d, lead, next, h)).collect();
            self.pos = end;
            self.ready = batch.into_iter();
        }
    }
}

fn block(d: usize, lead: i64, next: i64, h_max: f64) -> Result<Vec<AlgebraicNumber>> {
    let b = coefficient_bounds(d, h_max);
    let mut out = Vec::new();
    match d {
        1 => {
            for a0 in -b[0]..=b[0] {
                if lead.gcd(&a0) != 1 {
                    continue;
                }
                let mp = [a0, lead];
                let mut roots = [Complex64::new(-(a0 as f64) / lead as f64, 0.0)];
                out.extend(AlgebraicNumber::from_roots(&mp, &mut roots));
            }
        }
        2 => {
            let limit = h_max * h_max * (1.0 + HEIGHT_GUARD);
            for a0 in -b[0]..=b[0] {
                if a0 == 0 {
                    continue;
                }
                let c = [a0, next, lead];
                let mut roots = quadratic_roots(lead, next, a0);
                if poly::mahler_from_roots(lead, &roots) > limit {
                    continue;
                }
                if poly::content(&c) != 1 || is_square(next * next - 4 * lead * a0) {
                    continue;
                }
                out.extend(AlgebraicNumber::from_roots(&c, &mut roots));
            }
        }
        3 => {
            let limit = h_max.powi(3) * (1.0 + HEIGHT_GUARD);
            for a1 in -b[1]..=b[1] {
                for a0 in -b[0]..=b[0] {
                    if a0 == 0 {
                        continue;
                    }
                    let c = [a0, a1, next, lead];
                    if poly::content(&c) != 1 || !poly::is_irreducible_small(&c) {
                        continue;
                    }
                    let f = [a0 as f64, a1 as f64, next as f64, lead as f64];
                    let mut roots = poly::roots_real(&f)?;
                    if poly::mahler_from_roots(lead, &roots) > limit {
                        continue;
                    }
                    out.extend(AlgebraicNumber::from_roots(&c, &mut roots));
                }
            }
        }
        _ => unreachable!("degree checked by caller"),
    }
    Ok(out)
}

fn quadratic_roots(a: i64, b: i64, c: i64) -> Vec<Complex64> {
    let (a, b, c) = (a as f64, b as f64, c as f64);
    let disc = b * b - 4.0 * a * c;
    if disc >= 0.0 {
        let s = disc.sqrt();
        let q = -0.5 * (b + if b >= 0.0 { s } else { -s });
        vec![Complex64::new(q / a, 0.0), Complex64::new(c / q, 0.0)]
    } else {
        let re = -b / (2.0 * a);
        let im = (-disc).sqrt() / (2.0 * a);
        vec![Complex64::new(re, im), Complex64::new(re, -im)]
    }
}

fn is_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as f64).sqrt().round() as i64;
    (r - 1..=r + 1).any(|s| s >= 0 && s * s == n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Rational64;

    #[test]
    fn degree_one_height_two() {
        let all = enumerate(1, 2.0).unwrap();
        assert_eq!(all.len(), 7);
        // Oracle: reduced fractions p/q with max(|p|, |q|) <= 2.
        let mut oracle = Vec::new();
        for q in 1..=2i64 {
            for p in -2..=2i64 {
                let r = Rational64::new(p, q);
                if (p.gcd(&q) == 1 || p == 0) && !oracle.contains(&r) {
                    oracle.push(r);
                }
            }
        }
        assert_eq!(oracle.len(), 7);
        for a in &all {
            let (p, q) = a.as_rational().unwrap();
            assert!(oracle.contains(&Rational64::new(p, q)));
        }
        let values: Vec<f64> = enumerate(1, 1.0).unwrap().iter().map(|a| a.approx.re).collect();
        assert_eq!(values, vec![1.0, 0.0, -1.0]);
    }

    #[test]
    fn quadratics_of_small_height() {
        let all = enumerate(2, 2f64.sqrt()).unwrap();
        let has = |re: f64, im: f64| all.iter().any(|a| (a.approx - Complex64::new(re, im)).norm() < 1e-12);
        let s = 2f64.sqrt();
        assert!(has(s, 0.0) && has(-s, 0.0) && has(0.0, 1.0) && has(0.0, -1.0));
        // Brute-force oracle: irreducible primitive quadratics with coefficients in [-2, 2]
        // (enough since |a_i| <= binom(2, i) * 2) and Mahler measure <= 2.
        let mut count = 0;
        for a in 1..=2i64 {
            for b in -4..=4i64 {
                for c in -2..=2i64 {
                    let p = [c, b, a];
                    if c == 0 || poly::content(&p) != 1 || !poly::rational_roots(&p).is_empty() {
                        continue;
                    }
                    if poly::mahler_measure(&p).unwrap() <= 2.0 + 1e-9 {
                        count += 2;
                    }
                }
            }
        }
        assert_eq!(all.iter().filter(|a| a.degree() == 2).count(), count);
    }

    #[test]
    fn canonical_order_and_uniqueness() {
        let all = enumerate(2, 3.0).unwrap();
        for w in all.windows(2) {
            assert_eq!(w[0].canonical_cmp(&w[1]), std::cmp::Ordering::Less);
        }
    }

    #[test]
    fn cubic_enumeration_contains_cube_root() {
        let all = enumerate(3, 1.3).unwrap();
        let c = 2f64.cbrt();
        assert!(all.iter().any(|a| a.degree() == 3 && (a.approx.re - c).abs() < 1e-12 && a.approx.im == 0.0));
        for a in &all {
            assert!(a.height() <= 1.3 * (1.0 + 1e-9));
        }
    }

    #[test]
    fn budget_cap() {
        assert!(matches!(enumerate_blocks(3, 50.0, 1000), Err(Error::BudgetExceeded(_))));
        assert!(enumerate_blocks(4, 2.0, DEFAULT_BOX_CAP).is_err());
    }
}
