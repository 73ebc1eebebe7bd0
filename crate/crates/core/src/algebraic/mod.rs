//! Algebraic numbers given by integer minimal polynomials, their heights,
//! bounded enumeration and heuristic recognition from approximations.

mod detect;
mod enumerate;
pub mod poly;

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

pub use detect::{default_input_error, detect_algebraic, detect_algebraic_with_error, lll_reduce};
pub use enumerate::{box_size, enumerate, enumerate_blocks, Blocks, DEFAULT_BOX_CAP};

use crate::error::{Error, Result};

/// Relative slack allowed when comparing a Mahler measure with `H^d`.
pub const HEIGHT_GUARD: f64 = 1e-9;

/// An algebraic number: a root of an irreducible, primitive integer
/// polynomial with positive leading coefficient (ascending coefficients).
/// `root_index` counts roots in canonical order (argument in `(-pi, pi]`,
/// then real part, then imaginary part).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgebraicNumber {
    pub minpoly: Vec<i64>,
    pub root_index: usize,
    pub approx: Complex64,
    /// The disk of this radius around `approx` contains no other root.
    pub isolation_radius: f64,
    pub mahler: f64,
}

impl AlgebraicNumber {
    /// All roots of `minpoly`, which must be primitive and irreducible, in
    /// canonical order.
    pub fn roots_of(minpoly: &[i64]) -> Result<Vec<AlgebraicNumber>> {
        let d = poly::degree(minpoly);
        if d == 0 {
            return Err(Error::InvalidInput("constant polynomial has no roots".into()));
        }
        let f: Vec<f64> = minpoly[..=d].iter().map(|&a| a as f64).collect();
        let mut roots = poly::roots_real(&f)?;
        Ok(Self::from_roots(&minpoly[..=d], &mut roots))
    }

    pub(crate) fn from_roots(minpoly: &[i64], roots: &mut [Complex64]) -> Vec<AlgebraicNumber> {
        for r in roots.iter_mut() {
            if r.im.abs() <= 1e-10 * r.norm().max(1.0) {
                r.im = 0.0;
            }
        }
        roots.sort_by(|a, b| root_cmp(*a, *b));
        let d = roots.len();
        let mahler = if d == 1 {
            minpoly[0].unsigned_abs().max(minpoly[1].unsigned_abs()) as f64
        } else {
            poly::mahler_from_roots(minpoly[d], roots)
        };
        (0..d)
            .map(|i| {
                let sep =
                    (0..d).filter(|&j| j != i).map(|j| (roots[i] - roots[j]).norm()).fold(f64::INFINITY, f64::min);
                AlgebraicNumber {
                    minpoly: minpoly.to_vec(),
                    root_index: i,
                    approx: roots[i],
                    isolation_radius: if sep.is_finite() { sep / 3.0 } else { f64::INFINITY },
                    mahler,
                }
            })
            .collect()
    }

    /// The rational number `p/q`.
    pub fn rational(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        let mp = poly::primitive(&[-p, q]);
        let mut roots = [Complex64::new(-(mp[0] as f64) / mp[1] as f64, 0.0)];
        Ok(Self::from_roots(&mp, &mut roots).remove(0))
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn height(&self) -> f64 {
        height(self)
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// `(p, q)` with value `p/q`, for rational numbers.
    pub fn as_rational(&self) -> Option<(i64, i64)> {
        (self.degree() == 1).then(|| (-self.minpoly[0], self.minpoly[1]))
    }

    /// Canonical order: degree, coefficients from the leading one down, root index.
    pub fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.minpoly.iter().rev().cmp(other.minpoly.iter().rev()))
            .then_with(|| self.root_index.cmp(&other.root_index))
    }

    /// Human-readable minimal polynomial, highest power first.
    pub fn minpoly_string(&self) -> String {
        format_poly(&self.minpoly)
    }
}

fn root_cmp(a: Complex64, b: Complex64) -> Ordering {
    let arg = |z: Complex64| if z.im == 0.0 && z.re < 0.0 { PI } else { z.im.atan2(z.re) };
    arg(a).total_cmp(&arg(b)).then_with(|| a.re.total_cmp(&b.re)).then_with(|| a.im.total_cmp(&b.im))
}

/// Multiplicative height `M(minpoly)^(1/degree)`.
pub fn height(a: &AlgebraicNumber) -> f64 {
    let d = a.degree();
    if d == 1 {
        a.mahler
    } else {
        a.mahler.powf(1.0 / d as f64)
    }
}

/// `H(z, w) = max(H(z), H(w))`.
pub fn pair_height(z: &AlgebraicNumber, w: &AlgebraicNumber) -> f64 {
    height(z).max(height(w))
}

/// `x^3 - 2x + 1` style rendering.
pub fn format_poly(c: &[i64]) -> String {
    let mut out = String::new();
    for (i, &a) in c.iter().enumerate().rev() {
        if a == 0 {
            continue;
        }
        let sign = if a < 0 { "-" } else { "+" };
        if out.is_empty() {
            if a < 0 {
                out.push('-');
            }
        } else {
            out.push_str(&format!(" {sign} "));
        }
        let m = a.unsigned_abs();
        let coef = if m == 1 && i > 0 { String::new() } else { m.to_string() };
        let var = match i {
            0 => String::new(),
            1 => "x".to_string(),
            _ => format!("x^{i}"),
        };
        out.push_str(&coef);
        out.push_str(&var);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn heights_of_simple_numbers() {
        assert_eq!(AlgebraicNumber::rational(2, 1).unwrap().height(), 2.0);
        assert_eq!(AlgebraicNumber::rational(1, 3).unwrap().height(), 3.0);
        assert_eq!(AlgebraicNumber::rational(0, 5).unwrap().height(), 1.0);
        let sqrt2 = AlgebraicNumber::roots_of(&[-2, 0, 1]).unwrap();
        for a in &sqrt2 {
            assert!((a.height() - 2f64.sqrt()).abs() < 1e-12);
        }
        assert!(sqrt2[0].approx.re > 0.0 && sqrt2[1].approx.re < 0.0);
    }

    #[test]
    fn root_order_is_by_argument() {
        let i = AlgebraicNumber::roots_of(&[1, 0, 1]).unwrap();
        assert!((i[0].approx - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert!((i[1].approx - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn formatting() {
        assert_eq!(format_poly(&[-2, 0, 1]), "x^2 - 2");
        assert_eq!(format_poly(&[1, -3]), "-3x + 1");
        assert_eq!(format_poly(&[0, 1]), "x");
    }

    proptest::proptest! {
        #[test]
        fn roots_respect_height_and_conjugates(c0 in -6i64..=6, c1 in -6i64..=6, c2 in 1i64..=6) {
            let mp = [c0, c1, c2];
            proptest::prop_assume!(poly::is_irreducible_small(&mp) && poly::content(&mp) == 1);
            let roots = AlgebraicNumber::roots_of(&mp).unwrap();
            proptest::prop_assert_eq!(roots.len(), 2);
            let h = roots[0].height();
            for a in &roots {
                proptest::prop_assert!((a.height() - h).abs() < 1e-9 * h);
                proptest::prop_assert!(a.approx.norm() <= h * h * (1.0 + 1e-9));
                proptest::prop_assert!(poly::eval_complex(&mp, a.approx).norm() < 1e-9 * h.powi(2).max(1.0) * 10.0);
            }
            // Mahler measure from the roots equals the product formula.
            let m = (c2 as f64) * roots.iter().map(|a| a.approx.norm().max(1.0)).product::<f64>();
            proptest::prop_assert!((m.sqrt() - h).abs() < 1e-9 * h);
        }
    }
}
