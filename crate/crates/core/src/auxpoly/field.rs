//! The number field generated by a pair of algebraic numbers, built from a
//! primitive element `theta = x + k y`.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebraic::AlgebraicNumber;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// Remainder of `p` modulo a nonzero polynomial `m` (ascending coefficients).
pub fn poly_rem(p: &[BigRational], m: &[BigRational]) -> Vec<BigRational> {
    let dm = m.iter().rposition(|c| !c.is_zero()).expect("nonzero modulus");
    let mut r: Vec<BigRational> = p.to_vec();
    let lead_inv = m[dm].recip();
    while let Some(dr) = r.iter().rposition(|c| !c.is_zero()) {
        if dr < dm {
            break;
        }
        let f = &r[dr] * &lead_inv;
        for i in 0..=dm {
            let t = &f * &m[i];
            r[dr - dm + i] -= t;
        }
    }
    r.truncate(dm);
    r.resize(dm, BigRational::zero());
    r
}

fn poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `Q[t] / (g)` for a monic irreducible `g`; elements are coefficient vectors
/// of length `deg g`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumberField {
    pub modulus: Vec<BigRational>,
}

impl NumberField {
    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    pub fn constant(&self, c: BigRational) -> Vec<BigRational> {
        let mut v = vec![BigRational::zero(); self.degree()];
        v[0] = c;
        v
    }

    pub fn one(&self) -> Vec<BigRational> {
        self.constant(BigRational::one())
    }

    pub fn reduce(&self, p: &[BigRational]) -> Vec<BigRational> {
        poly_rem(p, &self.modulus)
    }

    pub fn mul(&self, a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
        self.reduce(&poly_mul(a, b))
    }
}

/// `Q(x, y)` with `x` and `y` written in a primitive element.
#[derive(Debug, Clone)]
pub struct PairField {
    pub field: NumberField,
    pub x: Vec<BigRational>,
    pub y: Vec<BigRational>,
    /// `theta = x + shift * y`.
    pub shift: i64,
    pub theta: Complex64,
}

fn monic(p: &[i64]) -> Vec<BigRational> {
    let lead = rat(*p.last().expect("nonempty"));
    p.iter().map(|&c| rat(c) / &lead).collect()
}

/// Multiplication by a generator in `Q[a]/(f) (x) Q[b]/(g)`, stored with index
/// `i * db + j` for `a^i b^j`.
fn mul_generator(
    e: &[BigRational],
    da: usize,
    db: usize,
    fa: &[BigRational],
    fb: &[BigRational],
    by_a: bool,
) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); da * db];
    for i in 0..da {
        for j in 0..db {
            let c = &e[i * db + j];
            if c.is_zero() {
                continue;
            }
            if by_a {
                if i + 1 < da {
                    out[(i + 1) * db + j] += c;
                } else {
                    for (l, f) in fa[..da].iter().enumerate() {
                        out[l * db + j] -= c * f;
                    }
                }
            } else if j + 1 < db {
                out[i * db + j + 1] += c;
            } else {
                for (l, f) in fb[..db].iter().enumerate() {
                    out[i * db + l] -= c * f;
                }
            }
        }
    }
    out
}

fn conjugates(a: &AlgebraicNumber) -> Result<Vec<Complex64>> {
    Ok(AlgebraicNumber::roots_of(&a.minpoly)?.into_iter().map(|r| r.approx).collect())
}

/// Builds `Q(x, y)` for the given pair.
pub fn pair_field(x: &AlgebraicNumber, y: &AlgebraicNumber) -> Result<PairField> {
    let (da, db) = (x.degree(), y.degree());
    let n = da * db;
    let (fa, fb) = (monic(&x.minpoly), monic(&y.minpoly));
    let (ra, rb) = (conjugates(x)?, conjugates(y)?);
    let scale = ra.iter().chain(&rb).map(|z| z.norm()).fold(1.0, f64::max);
    let shift = [1i64, -1, 2, -2, 3, -3, 5, -5, 7, -7, 11, -11]
        .into_iter()
        .find(|&k| {
            let th: Vec<Complex64> = ra.iter().flat_map(|a| rb.iter().map(move |b| a + b * k as f64)).collect();
            th.iter().enumerate().all(|(i, s)| th[i + 1..].iter().all(|t| (s - t).norm() > 1e-7 * scale))
        })
        .ok_or_else(|| Error::RootFindingFailure("no separating primitive element".into()))?;
    let kq = rat(shift);
    let thetas: Vec<Complex64> = ra.iter().flat_map(|a| rb.iter().map(move |b| a + b * shift as f64)).collect();
    let theta = x.approx + y.approx * shift as f64;

    // Powers of theta in the tensor algebra.
    let mut unit = vec![BigRational::zero(); n];
    unit[0] = BigRational::one();
    let mut powers = vec![unit];
    for _ in 0..n {
        let last = powers.last().expect("nonempty");
        let pa = mul_generator(last, da, db, &fa, &fb, true);
        let pb = mul_generator(last, da, db, &fa, &fb, false);
        powers.push(pa.iter().zip(&pb).map(|(u, v)| u + &kq * v).collect());
    }
    let basis: Matrix = (0..n).map(|row| (0..n).map(|m| powers[m][row].clone()).collect()).collect();
    let singular = || Error::RootFindingFailure("primitive element does not generate".into());
    let char_tail = linalg::solve(&basis, &powers[n]).ok_or_else(singular)?;
    let gen_a = element_of(da, db, &fa, true);
    let gen_b = element_of(da, db, &fb, false);
    let a_poly = linalg::solve(&basis, &gen_a).ok_or_else(singular)?;
    let b_poly = linalg::solve(&basis, &gen_b).ok_or_else(singular)?;

    let mut charpoly: Vec<BigRational> = char_tail.iter().map(|c| -c.clone()).collect();
    charpoly.push(BigRational::one());
    let g = minimal_factor(&charpoly, &thetas, theta)?;
    let field = NumberField { modulus: g };
    let xa = field.reduce(&a_poly);
    let yb = field.reduce(&b_poly);
    Ok(PairField { field, x: xa, y: yb, shift, theta })
}

/// Coordinates of the generator `a` (or `b`) in the tensor algebra.
fn element_of(da: usize, db: usize, f: &[BigRational], is_a: bool) -> Vec<BigRational> {
    let mut v = vec![BigRational::zero(); da * db];
    let deg = if is_a { da } else { db };
    if deg == 1 {
        v[0] = -f[0].clone() / &f[1];
    } else if is_a {
        v[db] = BigRational::one();
    } else {
        v[1] = BigRational::one();
    }
    v
}

/// Smallest monic rational factor of `r` vanishing at `theta`, found by
/// testing products over subsets of the numeric roots and confirming by
/// exact division.
fn minimal_factor(r: &[BigRational], roots: &[Complex64], theta: Complex64) -> Result<Vec<BigRational>> {
    let n = roots.len();
    let home = (0..n)
        .min_by(|&i, &j| (roots[i] - theta).norm().total_cmp(&(roots[j] - theta).norm()))
        .expect("at least one root");
    let others: Vec<usize> = (0..n).filter(|&i| i != home).collect();
    let lcm = r.iter().fold(BigInt::one(), |l, c| num_integer::Integer::lcm(&l, c.denom()));
    let r_int: Vec<BigInt> = r.iter().map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let lead = r_int.last().expect("nonempty").abs().to_f64().unwrap_or(f64::INFINITY);
    for size in 0..others.len() + 1 {
        for subset in subsets(&others, size) {
            let mut p = vec![Complex64::new(1.0, 0.0)];
            for &i in std::iter::once(&home).chain(&subset) {
                let mut next = vec![Complex64::new(0.0, 0.0); p.len() + 1];
                for (d, c) in p.iter().enumerate() {
                    next[d + 1] += c;
                    next[d] -= c * roots[i];
                }
                p = next;
            }
            let scaled: Vec<f64> = p.iter().map(|c| c.re * lead).collect();
            let imag_ok = p.iter().all(|c| (c.im * lead).abs() < 1e-3);
            let fits = scaled.iter().all(|c| c.abs() < 2f64.powi(50));
            if !imag_ok || !fits {
                continue;
            }
            let ints: Vec<BigRational> = scaled.iter().map(|c| rat(c.round() as i64)).collect();
            let lead_c = ints.last().expect("nonempty").clone();
            if lead_c.is_zero() {
                continue;
            }
            let cand: Vec<BigRational> = ints.iter().map(|c| c / &lead_c).collect();
            if poly_rem(r, &cand).iter().all(|c| c.is_zero()) {
                return Ok(cand);
            }
        }
    }
    Err(Error::RootFindingFailure("minimal polynomial of the primitive element not found".into()))
}

fn subsets(items: &[usize], size: usize) -> Vec<Vec<usize>> {
    if size == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &first) in items.iter().enumerate() {
        for mut rest in subsets(&items[i + 1..], size - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(minpoly: &[i64], near: f64) -> AlgebraicNumber {
        AlgebraicNumber::roots_of(minpoly)
            .unwrap()
            .into_iter()
            .min_by(|a, b| (a.approx.re - near).abs().total_cmp(&(b.approx.re - near).abs()))
            .unwrap()
    }

    #[test]
    fn shared_quadratic_field() {
        let s2 = alg(&[-2, 0, 1], 1.4);
        let s2p1 = alg(&[-1, -2, 1], 2.4);
        let pf = pair_field(&s2, &s2p1).unwrap();
        assert_eq!(pf.field.degree(), 2);
        // y - x - 1 = 0 in the field.
        let diff: Vec<BigRational> = pf.y.iter().zip(&pf.x).map(|(a, b)| a - b).collect();
        assert_eq!(diff, pf.field.one());
    }

    #[test]
    fn biquadratic_field() {
        let s2 = alg(&[-2, 0, 1], 1.4);
        let s3 = alg(&[-3, 0, 1], 1.7);
        let pf = pair_field(&s2, &s3).unwrap();
        assert_eq!(pf.field.degree(), 4);
        let x2 = pf.field.mul(&pf.x, &pf.x);
        assert_eq!(x2, pf.field.constant(rat(2)));
        let y2 = pf.field.mul(&pf.y, &pf.y);
        assert_eq!(y2, pf.field.constant(rat(3)));
    }

    #[test]
    fn rational_pair() {
        let a = AlgebraicNumber::rational(1, 2).unwrap();
        let b = AlgebraicNumber::rational(-3, 1).unwrap();
        let pf = pair_field(&a, &b).unwrap();
        assert_eq!(pf.field.degree(), 1);
        assert_eq!(pf.x, vec![BigRational::new(1.into(), 2.into())]);
        assert_eq!(pf.y, vec![rat(-3)]);
    }
}
