use std::fmt;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::auxpoly::AuxPolynomial;
use crate::error::{Error, Result};

/// `P(X, Y) = sum c[i][j] X^i Y^j` with real coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BivariatePoly {
    coeffs: Vec<Vec<f64>>,
    deg_x: usize,
    deg_y: usize,
}

impl BivariatePoly {
    /// From a dense table `coeffs[i][j]`; rows may have different lengths.
    pub fn new(coeffs: Vec<Vec<f64>>) -> Result<Self> {
        let mut terms = Vec::new();
        for (i, row) in coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                terms.push((i, j, c));
            }
        }
        Self::from_terms(&terms)
    }

    /// From `(i, j, c)` triples; repeated monomials are summed.
    pub fn from_terms(terms: &[(usize, usize, f64)]) -> Result<Self> {
        if terms.iter().any(|t| !t.2.is_finite()) {
            return Err(Error::InvalidInput("non-finite coefficient".into()));
        }
        let live: Vec<_> = terms.iter().filter(|t| t.2 != 0.0).collect();
        let deg_x = live.iter().map(|t| t.0).max();
        let deg_y = live.iter().map(|t| t.1).max();
        let (Some(deg_x), Some(deg_y)) = (deg_x, deg_y) else {
            return Err(Error::InvalidInput("zero polynomial".into()));
        };
        let mut coeffs = vec![vec![0.0; deg_y + 1]; deg_x + 1];
        for &&(i, j, c) in &live {
            coeffs[i][j] += c;
        }
        if coeffs.iter().flatten().all(|&c| c == 0.0) {
            return Err(Error::InvalidInput("zero polynomial".into()));
        }
        let mut p = Self { coeffs, deg_x, deg_y };
        p.trim();
        Ok(p)
    }

    fn trim(&mut self) {
        let nz = |i: usize, j: usize| self.coeffs[i][j] != 0.0;
        let dx = (0..=self.deg_x).rev().find(|&i| (0..=self.deg_y).any(|j| nz(i, j))).unwrap_or(0);
        let dy = (0..=self.deg_y).rev().find(|&j| (0..=self.deg_x).any(|i| nz(i, j))).unwrap_or(0);
        self.coeffs.truncate(dx + 1);
        for row in &mut self.coeffs {
            row.truncate(dy + 1);
        }
        self.deg_x = dx;
        self.deg_y = dy;
    }

    pub fn from_aux(p: &AuxPolynomial) -> Result<Self> {
        let terms: Vec<_> = p
            .terms()
            .into_iter()
            .map(|(i, j, c)| (i, j, num_traits::ToPrimitive::to_f64(&c).unwrap_or(f64::NAN)))
            .collect();
        Self::from_terms(&terms)
    }

    /// Parses sums of terms like `3*X^2*Y - Y + 1/2`; `x` and `y` are accepted
    /// as well as `X` and `Y`.
    pub fn parse(s: &str) -> Result<Self> {
        let bad = |m: &str| Error::InvalidInput(format!("polynomial '{s}': {m}"));
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(bad("empty"));
        }
        let mut terms = Vec::new();
        let mut start = 0;
        let bytes = cleaned.as_bytes();
        let mut pieces = Vec::new();
        for k in 1..=bytes.len() {
            let split = k == bytes.len()
                || ((bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E' | b'^' | b'*'));
            if split {
                pieces.push(&cleaned[start..k]);
                start = k;
            }
        }
        for piece in pieces {
            let (sign, body) = match piece.as_bytes()[0] {
                b'-' => (-1.0, &piece[1..]),
                b'+' => (1.0, &piece[1..]),
                _ => (1.0, piece),
            };
            if body.is_empty() {
                return Err(bad("dangling sign"));
            }
            let (mut c, mut i, mut j) = (sign, 0usize, 0usize);
            for factor in body.split('*') {
                let (base, exp) = match factor.split_once('^') {
                    Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad("bad exponent"))?),
                    None => (factor, 1),
                };
                match base {
                    "X" | "x" => i += exp,
                    "Y" | "y" => j += exp,
                    num => {
                        let v = match num.split_once('/') {
                            Some((a, b)) => {
                                let (a, b): (f64, f64) = (
                                    a.parse().map_err(|_| bad("bad number"))?,
                                    b.parse().map_err(|_| bad("bad number"))?,
                                );
                                a / b
                            }
                            None => num.parse::<f64>().map_err(|_| bad("bad factor"))?,
                        };
                        c *= v.powi(exp as i32);
                    }
                }
            }
            terms.push((i, j, c));
        }
        Self::from_terms(&terms)
    }

    /// Random polynomial with integer coefficients in `[-bound, bound]` and
    /// `1 <= max(deg_x, deg_y) <= l_max`.
    pub fn random<R: Rng>(rng: &mut R, l_max: usize, bound: i64) -> Self {
        loop {
            let dx = rng.random_range(0..=l_max);
            let dy = rng.random_range(0..=l_max);
            if dx.max(dy) == 0 {
                continue;
            }
            let coeffs: Vec<Vec<f64>> =
                (0..=dx).map(|_| (0..=dy).map(|_| rng.random_range(-bound..=bound) as f64).collect()).collect();
            if let Ok(p) = Self::new(coeffs) {
                if p.l() >= 1 {
                    return p;
                }
            }
        }
    }

    pub fn deg_x(&self) -> usize {
        self.deg_x
    }

    pub fn deg_y(&self) -> usize {
        self.deg_y
    }

    /// `L = max(deg_x, deg_y)`.
    pub fn l(&self) -> usize {
        self.deg_x.max(self.deg_y)
    }

    pub fn coeff(&self, i: usize, j: usize) -> f64 {
        self.coeffs.get(i).and_then(|r| r.get(j)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.iter().enumerate().map(move |(j, &c)| (i, j, c)))
            .filter(|t| t.2 != 0.0)
    }

    pub fn is_integral(&self) -> bool {
        self.terms().all(|t| t.2.fract() == 0.0)
    }

    pub fn max_abs(&self) -> f64 {
        self.terms().map(|t| t.2.abs()).fold(0.0, f64::max)
    }

    /// Coefficients of `X^i` in `P(X, Y)` at `Y^j`, ascending in `i`.
    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..=self.deg_x).map(|i| self.coeff(i, j)).collect()
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms().map(|(i, j, c)| x.powu(i as u32) * y.powu(j as u32) * c).sum()
    }

    /// `log P(z, s)` and `(d/dz) log P(z, s(z))` given `log z`, `log s` and
    /// `s'/s`, evaluated by a shifted log-sum so huge `|s|` cannot overflow.
    /// `log z` may be `None` when `z = 0`.
    pub fn log_eval(&self, z: Complex64, log_s: Complex64, dlog_s: Complex64) -> (Complex64, Complex64) {
        let log_z = (z != Complex64::new(0.0, 0.0)).then(|| z.ln());
        let mut logs = Vec::new();
        for (i, j, c) in self.terms() {
            let lc = Complex64::new(c.abs().ln(), if c < 0.0 { std::f64::consts::PI } else { 0.0 });
            let lt = match (i, log_z) {
                (0, _) => lc + log_s * j as f64,
                (_, Some(lz)) => lc + lz * i as f64 + log_s * j as f64,
                (_, None) => continue,
            };
            logs.push((i, j, lt));
        }
        let top = logs.iter().map(|t| t.2.re).fold(f64::NEG_INFINITY, f64::max);
        if !top.is_finite() {
            return (Complex64::new(f64::NEG_INFINITY, 0.0), Complex64::new(f64::NAN, f64::NAN));
        }
        let mut sum = Complex64::new(0.0, 0.0);
        let mut dsum = Complex64::new(0.0, 0.0);
        for (i, j, lt) in logs {
            let w = (lt - top).exp();
            sum += w;
            let mut dl = dlog_s * j as f64;
            if i > 0 {
                dl += i as f64 / z;
            }
            dsum += w * dl;
        }
        (sum.ln() + top, dsum / sum)
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|&(i, j, _)| std::cmp::Reverse((i + j, i)));
        for (i, j, c) in terms {
            let sign = if c < 0.0 { "-" } else { "+" };
            if first {
                if c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let mut parts = Vec::new();
            if c.abs() != 1.0 || (i == 0 && j == 0) {
                parts.push(format!("{}", c.abs()));
            }
            match i {
                0 => {}
                1 => parts.push("X".into()),
                _ => parts.push(format!("X^{i}")),
            }
            match j {
                0 => {}
                1 => parts.push("Y".into()),
                _ => parts.push(format!("Y^{j}")),
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let p = BivariatePoly::parse("3*X^2*Y - Y + 1/2").unwrap();
        assert_eq!((p.deg_x(), p.deg_y(), p.l()), (2, 1, 2));
        assert_eq!(p.coeff(2, 1), 3.0);
        assert_eq!(p.coeff(0, 1), -1.0);
        assert_eq!(p.coeff(0, 0), 0.5);
        assert_eq!(p.to_string(), "3*X^2*Y - Y + 0.5");
        assert!(BivariatePoly::parse("X - X").is_err());
        assert!(BivariatePoly::parse("").is_err());
        assert!(BivariatePoly::parse("Z").is_err());
    }

    #[test]
    fn log_eval_matches_direct() {
        let p = BivariatePoly::parse("2*X^3*Y^2 - 5*X*Y + 7 - Y^3").unwrap();
        let z = Complex64::new(0.7, -1.3);
        let s = Complex64::new(-2.1, 0.4);
        let ds = Complex64::new(0.3, 0.9);
        let (lf, ratio) = p.log_eval(z, s.ln(), ds / s);
        let direct = p.eval(z, s);
        assert!((lf.exp() - direct).norm() < 1e-12 * direct.norm());
        // d/dz P(z, s(z)) = P_X + P_Y s'.
        let px = 6.0 * z * z * s * s - 5.0 * s;
        let py = 4.0 * z.powu(3) * s - 5.0 * z - 3.0 * s * s;
        let expected = (px + py * ds) / direct;
        assert!((ratio - expected).norm() < 1e-12 * expected.norm());
    }

    proptest::proptest! {
        #[test]
        fn display_round_trips(seed in 0u64..10_000) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let p = BivariatePoly::random(&mut rng, 4, 5);
            let q = BivariatePoly::parse(&p.to_string()).unwrap();
            proptest::prop_assert_eq!(p, q);
        }
    }
}
