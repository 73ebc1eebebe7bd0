//! Auxiliary polynomials: the parameter condition of the interpolation
//! proposition, degree choices, and an exact builder of integer polynomials
//! vanishing at prescribed algebraic points.

mod field;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

pub use field::{pair_field, NumberField, PairField};

use crate::algebraic::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::linalg;

/// `P(X, Y) = sum coeffs[i][j] X^i Y^j` with `i + j <= t`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuxPolynomial {
    pub t: usize,
    #[serde(serialize_with = "serialize_bigint_rows")]
    pub coeffs: Vec<Vec<BigInt>>,
    #[serde(serialize_with = "serialize_bigint")]
    pub max_abs: BigInt,
}

fn serialize_bigint<S: serde::Serializer>(v: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn serialize_bigint_rows<S: serde::Serializer>(v: &[Vec<BigInt>], s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for row in v {
        let strs: Vec<String> = row.iter().map(|c| c.to_string()).collect();
        seq.serialize_element(&strs)?;
    }
    seq.end()
}

/// Monomials `X^i Y^j` of total degree `<= t`, graded, `X`-heavy first.
pub fn monomials(t: usize) -> Vec<(usize, usize)> {
    (0..=t).flat_map(|s| (0..=s).rev().map(move |i| (i, s - i))).collect()
}

impl AuxPolynomial {
    fn from_vector(t: usize, v: &[BigInt]) -> Self {
        let mut coeffs: Vec<Vec<BigInt>> = (0..=t).map(|i| vec![BigInt::zero(); t + 1 - i]).collect();
        for (&(i, j), c) in monomials(t).iter().zip(v) {
            coeffs[i][j] = c.clone();
        }
        let max_abs = v.iter().map(|c| c.abs()).max().unwrap_or_default();
        Self { t, coeffs, max_abs }
    }

    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.coeffs.get(i).and_then(|r| r.get(j)).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().flatten().all(|c| c.is_zero())
    }

    /// Nonzero terms `(i, j, c)`.
    pub fn terms(&self) -> Vec<(usize, usize, BigInt)> {
        monomials(self.t).into_iter().map(|(i, j)| (i, j, self.coeff(i, j))).filter(|(_, _, c)| !c.is_zero()).collect()
    }

    /// Dense `f64` coefficients `[i][j]` for `i, j <= t`.
    pub fn to_f64_grid(&self) -> Vec<Vec<f64>> {
        let mut g = vec![vec![0.0; self.t + 1]; self.t + 1];
        for (i, j, c) in self.terms() {
            g[i][j] = c.to_f64().unwrap_or(f64::NAN);
        }
        g
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms()
            .into_iter()
            .map(|(i, j, c)| x.powu(i as u32) * y.powu(j as u32) * c.to_f64().unwrap_or(f64::NAN))
            .sum()
    }

    /// `P(x, y)` in the number field of the pair.
    pub fn eval_exact(&self, pf: &PairField) -> Vec<BigRational> {
        let rows = monomial_values(pf, self.t);
        let mut acc = vec![BigRational::zero(); pf.field.degree()];
        for (k, (i, j)) in monomials(self.t).into_iter().enumerate() {
            let c = self.coeff(i, j);
            if c.is_zero() {
                continue;
            }
            let c = BigRational::from_integer(c);
            for (a, v) in acc.iter_mut().zip(&rows[k]) {
                *a += &c * v;
            }
        }
        acc
    }

    /// Whether `P` vanishes exactly at every pair.
    pub fn vanishes_at(&self, points: &[(AlgebraicNumber, AlgebraicNumber)]) -> Result<bool> {
        for (x, y) in points {
            let pf = pair_field(x, y)?;
            if self.eval_exact(&pf).iter().any(|c| !c.is_zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Values of all monomials of degree `<= t` in the pair's field.
fn monomial_values(pf: &PairField, t: usize) -> Vec<Vec<BigRational>> {
    let f = &pf.field;
    let mut xp = vec![f.one()];
    let mut yp = vec![f.one()];
    for k in 0..t {
        xp.push(f.mul(&xp[k], &pf.x));
        yp.push(f.mul(&yp[k], &pf.y));
    }
    monomials(t).into_iter().map(|(i, j)| f.mul(&xp[i], &yp[j])).collect()
}

/// An integer polynomial of total degree `<= t`, not identically zero,
/// vanishing exactly at every pair together with all its conjugates.
///
/// Among the kernel basis vectors (scaled to coprime integers) the one with
/// the smallest maximal coefficient is returned, ties broken
/// lexicographically.
pub fn construct_vanishing(points: &[(AlgebraicNumber, AlgebraicNumber)], t: usize) -> Result<AuxPolynomial> {
    if t == 0 {
        return Err(Error::DegreeTooSmall { t, min: 1 });
    }
    let mons = monomials(t).len();
    let mut rows: linalg::Matrix = Vec::new();
    let mut fields = Vec::with_capacity(points.len());
    for (x, y) in points {
        let pf = pair_field(x, y)?;
        let vals = monomial_values(&pf, t);
        for coord in 0..pf.field.degree() {
            rows.push(vals.iter().map(|v| v[coord].clone()).collect());
        }
        fields.push(pf);
    }
    let kernel = linalg::nullspace(&rows, mons);
    let best = kernel
        .iter()
        .map(|v| linalg::primitive_integer_vector(v))
        .min_by(|a, b| {
            let ma = a.iter().map(|c| c.abs()).max();
            let mb = b.iter().map(|c| c.abs()).max();
            ma.cmp(&mb).then_with(|| a.cmp(b))
        })
        .ok_or(Error::NoKernel)?;
    let p = AuxPolynomial::from_vector(t, &best);
    for pf in &fields {
        if p.eval_exact(pf).iter().any(|c| !c.is_zero()) {
            return Err(Error::RootFindingFailure("kernel vector failed exact verification".into()));
        }
    }
    Ok(p)
}

/// Parameters of the interpolation proposition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MasserParameters {
    pub d: usize,
    pub t: usize,
    pub a: f64,
    pub z: f64,
    pub m: f64,
    pub h: f64,
}

impl MasserParameters {
    pub fn validate(&self) -> Result<()> {
        let min = min_degree(self.d);
        if self.d < 1 {
            return Err(Error::DomainViolation("d >= 1 required".into()));
        }
        if self.t < min {
            return Err(Error::DegreeTooSmall { t: self.t, min });
        }
        if !(self.a > 0.0 && self.z > 0.0 && self.m > 0.0) {
            return Err(Error::DomainViolation("A, Z, M must be positive".into()));
        }
        if !(self.h >= 1.0) {
            return Err(Error::DomainViolation("H >= 1 required".into()));
        }
        Ok(())
    }
}

/// Both sides of `(AZ)^T > (4T)^{96 d^2 / T} (M+1)^{16 d} H^{48 d^2}` in log form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MasserCheck {
    pub holds: bool,
    pub lhs_log: f64,
    pub rhs_log: f64,
}

/// `ceil(sqrt(8 d))`.
pub fn min_degree(d: usize) -> usize {
    (8.0 * d as f64).sqrt().ceil() as usize
}

pub fn masser_condition(p: &MasserParameters) -> Result<MasserCheck> {
    p.validate()?;
    let (d, t) = (p.d as f64, p.t as f64);
    let lhs_log = t * (p.a * p.z).ln();
    let rhs_log = (96.0 * d * d / t) * (4.0 * t).ln() + 16.0 * d * (p.m + 1.0).ln() + 48.0 * d * d * p.h.ln();
    Ok(MasserCheck { holds: lhs_log > rhs_log, lhs_log, rhs_log })
}

/// Checks the parameter condition, then builds the vanishing polynomial.
pub fn construct_masser(
    points: &[(AlgebraicNumber, AlgebraicNumber)],
    params: &MasserParameters,
) -> Result<(AuxPolynomial, MasserCheck)> {
    let check = masser_condition(params)?;
    Ok((construct_vanishing(points, params.t)?, check))
}

/// `T = ceil(c3 d^3 log H)`, at least `ceil(sqrt(8 d))`.
pub fn choose_t_periods(d: usize, h: f64, c3: f64) -> Result<usize> {
    degree_choice(d, h, c3 * (d as f64).powi(3) * h.ln())
}

/// `T = ceil(c11 d^10 (log d)^2 log H)`, at least `ceil(sqrt(8 d))`.
pub fn choose_t_invariants(d: usize, h: f64, c11: f64) -> Result<usize> {
    let df = d as f64;
    degree_choice(d, h, c11 * df.powi(10) * df.ln().powi(2) * h.ln())
}

fn degree_choice(d: usize, h: f64, raw: f64) -> Result<usize> {
    if d < 1 || !(h >= std::f64::consts::E) {
        return Err(Error::DomainViolation(format!("need d >= 1 and H >= e, got d = {d}, H = {h}")));
    }
    if !raw.is_finite() || raw > 1e15 {
        return Err(Error::BudgetExceeded(format!("degree choice {raw:.3e} too large")));
    }
    let t = (raw - 1e-9 * raw.abs()).ceil().max(0.0) as usize;
    Ok(t.max(min_degree(d)))
}

/// `log(2^{1/d} (T+1)^2 H^T)`, the coefficient size bound for integer
/// auxiliary polynomials.
pub fn coefficient_bound_log(d: usize, t: usize, h: f64) -> f64 {
    std::f64::consts::LN_2 / d as f64 + 2.0 * ((t + 1) as f64).ln() + t as f64 * h.ln()
}

/// Compares the largest coefficient of `p` with the coefficient bound.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientReport {
    pub max_abs_log: f64,
    pub bound_log: f64,
    pub within_bound: bool,
}

pub fn coefficient_report(p: &AuxPolynomial, d: usize, h: f64) -> CoefficientReport {
    let max_abs_log = p.max_abs.to_f64().map_or(f64::INFINITY, |v| v.ln());
    let bound_log = coefficient_bound_log(d, p.t, h);
    CoefficientReport { max_abs_log, bound_log, within_bound: max_abs_log <= bound_log }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rational_pair(x: (i64, i64), y: (i64, i64)) -> (AlgebraicNumber, AlgebraicNumber) {
        (AlgebraicNumber::rational(x.0, x.1).unwrap(), AlgebraicNumber::rational(y.0, y.1).unwrap())
    }

    fn params(d: usize, t: usize, a: f64, z: f64, m: f64, h: f64) -> MasserParameters {
        MasserParameters { d, t, a, z, m, h }
    }

    #[test]
    fn origin_with_linear_polynomial() {
        let p = construct_vanishing(&[rational_pair((0, 1), (0, 1))], 1).unwrap();
        assert!(!p.is_zero());
        assert!(p.coeff(0, 0).is_zero());
    }

    #[test]
    fn collinear_points_give_the_line() {
        let pts = [rational_pair((1, 1), (2, 1)), rational_pair((2, 1), (4, 1)), rational_pair((3, 1), (6, 1))];
        let p = construct_vanishing(&pts, 1).unwrap();
        let (x, y) = (p.coeff(1, 0), p.coeff(0, 1));
        assert!(p.coeff(0, 0).is_zero());
        assert_eq!(x, -(&y * BigInt::from(2)));
        assert_eq!(y.abs(), BigInt::from(1));
    }

    #[test]
    fn quadratic_field_point() {
        let s2 = AlgebraicNumber::roots_of(&[-2, 0, 1]).unwrap().remove(0);
        let s2p1 = AlgebraicNumber::roots_of(&[-1, -2, 1]).unwrap().into_iter().find(|a| a.approx.re > 2.0).unwrap();
        let pts = [(s2, s2p1)];
        let p = construct_vanishing(&pts, 1).unwrap();
        // +-(Y - X - 1)
        let s = p.coeff(0, 1);
        assert_eq!(s.abs(), BigInt::from(1));
        assert_eq!(p.coeff(1, 0), -s.clone());
        assert_eq!(p.coeff(0, 0), -s);
        assert!(p.vanishes_at(&pts).unwrap());
    }

    #[test]
    fn full_rank_has_no_kernel() {
        let pts = [rational_pair((0, 1), (0, 1)), rational_pair((1, 1), (0, 1)), rational_pair((0, 1), (1, 1))];
        assert_eq!(construct_vanishing(&pts, 1), Err(Error::NoKernel));
        assert!(matches!(construct_vanishing(&pts, 0), Err(Error::DegreeTooSmall { .. })));
    }

    #[test]
    fn masser_condition_examples() {
        let lhs_zero = masser_condition(&params(1, 3, 1.0, 1.0, 1.0, 1.0)).unwrap();
        assert_eq!(lhs_zero.lhs_log, 0.0);
        assert!(!lhs_zero.holds);
        let small = masser_condition(&params(1, 3, 10.0, 10.0, 1.0, 1.0)).unwrap();
        assert!((small.lhs_log - 13.8155).abs() < 1e-3);
        assert!((small.rhs_log - 90.609).abs() < 1e-2);
        assert!(!small.holds);
        let big = masser_condition(&params(1, 40, 10.0, 10.0, 1.0, 1.0)).unwrap();
        assert!((big.lhs_log - 184.207).abs() < 1e-2);
        assert!((big.rhs_log - 23.271).abs() < 1e-2);
        assert!(big.holds);
        assert!(matches!(
            masser_condition(&params(1, 2, 10.0, 10.0, 1.0, 1.0)),
            Err(Error::DegreeTooSmall { t: 2, min: 3 })
        ));
    }

    #[test]
    fn degree_choices() {
        assert_eq!(choose_t_periods(1, std::f64::consts::E, 1.0).unwrap(), 3);
        assert_eq!(choose_t_periods(2, std::f64::consts::E.powi(2), 2.0).unwrap(), 32);
        // c11 d^10 (log d)^2 log H with d = e, H = e: e^10.
        let t = choose_t_invariants(3, std::f64::consts::E, 1.0).unwrap();
        assert_eq!(t, (59049.0 * 3f64.ln().powi(2)).ceil() as usize);
    }
}
