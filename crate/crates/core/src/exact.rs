//! Exact Gaussian-rational numbers and the complex-literal syntax used for
//! lattice periods (`a+bi` with decimal or rational parts).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_integers(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    pub fn zero() -> Self {
        Self::from_integers(0, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn div(&self, other: &Self) -> Option<Self> {
        let n = other.norm_sqr();
        if n.is_zero() {
            return None;
        }
        let num = self * &other.conj();
        Some(Self::new(num.re / &n, num.im / n))
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        let sign = if self.im.is_negative() { '-' } else { '+' };
        write!(f, "{}{}{}i", self.re, sign, self.im.abs())
    }
}

impl Add for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl Sub for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl Mul for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: Self) -> GaussianRational {
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

/// `n * g` for a machine integer `n`.
pub fn int_mul(n: i64, g: &GaussianRational) -> GaussianRational {
    g.scale(&BigRational::from_integer(n.into()))
}

/// Conversion that survives numerators and denominators beyond f64 range.
pub fn rat_to_f64(r: &BigRational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = r.numer();
    let d = r.denom();
    let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
    let n = (n >> shift).to_f64().unwrap_or(f64::NAN);
    let d = (d >> shift).to_f64().unwrap_or(f64::NAN);
    n / d
}

fn parse_decimal(s: &str) -> Result<BigRational> {
    let bad = || Error::InvalidInput(format!("cannot parse number `{s}`"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(pos) => (&s[..pos], s[pos + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, digits) = match mant.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let all: String = format!("{int_part}{frac_part}");
    let num: BigInt = all.parse().map_err(|_| bad())?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut r = BigRational::from_integer(num);
    if scale >= 0 {
        r *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Ok(if neg { -r } else { r })
}

/// Parses `p/q`, a decimal such as `-0.25`, or an exponent form such as `1e-3`.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p = parse_decimal(p.trim())?;
            let q = parse_decimal(q.trim())?;
            if q.is_zero() {
                return Err(Error::InvalidInput(format!("zero denominator in `{s}`")));
            }
            Ok(p / q)
        }
        None => parse_decimal(s),
    }
}

impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::InvalidInput("empty complex literal".into()));
        }
        let Some(body) = s.strip_suffix('i') else {
            return Ok(Self::new(parse_rational(&s)?, BigRational::zero()));
        };
        // Split at the last sign that is not a leading sign or an exponent sign.
        let bytes = body.as_bytes();
        let mut split = None;
        for (idx, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E' | b'/') {
                split = Some(idx);
            }
        }
        let (re_txt, im_txt) = match split {
            Some(idx) => (&body[..idx], &body[idx..]),
            None => ("", body),
        };
        let im = match im_txt {
            "" | "+" => BigRational::one(),
            "-" => -BigRational::one(),
            t => {
                let t = t.strip_suffix('*').unwrap_or(t);
                parse_rational(t)?
            }
        };
        let re = if re_txt.is_empty() { BigRational::zero() } else { parse_rational(re_txt)? };
        Ok(Self::new(re, im))
    }
}
