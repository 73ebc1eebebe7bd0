//! q-series for the Eisenstein series E2, E4, E6 and the odd Jacobi theta
//! function, with truncation driven by explicit tail bounds.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const MAX_TERMS: usize = 1_000_000;

/// `e^{2 pi i tau}`.
pub fn nome_q(tau: Complex64) -> Complex64 {
    (Complex64::i() * 2.0 * PI * tau).exp()
}

/// `sum_{n >= 1} n^k q^n / (1 - q^n)`, truncated once the tail bound
/// `(N+1)^k |q|^{N+1} / ((1-|q|)(1-r))`, `r = ((N+2)/(N+1))^k |q|`,
/// times `weight` drops below `tol`.
fn lambert_sum(q: Complex64, k: i32, weight: f64, tol: f64) -> Result<Complex64> {
    let aq = q.norm();
    if !(aq < 1.0 - 1e-9) {
        return Err(Error::PrecisionUnreachable(format!("|q| = {aq} too close to 1")));
    }
    let mut sum = Complex64::new(0.0, 0.0);
    let mut qn = Complex64::new(1.0, 0.0);
    let mut aqn = 1.0f64;
    for n in 1..=MAX_TERMS {
        qn *= q;
        aqn *= aq;
        let nk = (n as f64).powi(k);
        sum += qn * nk / (1.0 - qn);
        let n1 = (n + 1) as f64;
        let r = ((n1 + 1.0) / n1).powi(k) * aq;
        if r < 1.0 {
            let tail = weight * n1.powi(k) * aqn * aq / ((1.0 - aq) * (1.0 - r));
            if tail < tol || aqn == 0.0 {
                return Ok(sum);
            }
        }
    }
    Err(Error::PrecisionUnreachable(format!("tail bound not reached after {MAX_TERMS} terms")))
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0 && tol < 1e-3) {
        return Err(Error::InvalidInput(format!("tolerance {tol} outside (0, 1e-3)")));
    }
    Ok(())
}

/// `E2(tau) = 1 - 24 sum n q^n / (1 - q^n)`.
pub fn eisenstein_e2(tau: Complex64, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    Ok(1.0 - 24.0 * lambert_sum(nome_q(tau), 1, 24.0, tol)?)
}

/// `E4(tau) = 1 + 240 sum n^3 q^n / (1 - q^n)`.
pub fn eisenstein_e4(tau: Complex64, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    Ok(1.0 + 240.0 * lambert_sum(nome_q(tau), 3, 240.0, tol)?)
}

/// `E6(tau) = 1 - 504 sum n^5 q^n / (1 - q^n)`.
pub fn eisenstein_e6(tau: Complex64, tol: f64) -> Result<Complex64> {
    check_tol(tol)?;
    Ok(1.0 - 504.0 * lambert_sum(nome_q(tau), 5, 504.0, tol)?)
}

/// The odd theta function
/// `theta1(v | tau) = 2 sum_{n>=0} (-1)^n p^{(n+1/2)^2} sin((2n+1) v)`,
/// `p = e^{i pi tau}`, evaluated for fixed `tau`.
#[derive(Debug, Clone)]
pub struct Theta1 {
    tau: Complex64,
    tol: f64,
    /// `theta1'(0)`, `theta1'''(0)`.
    pub d1_at_zero: Complex64,
    pub d3_at_zero: Complex64,
}

/// `theta1(v) = e^{scale} value`, `theta1'(v) = e^{scale} derivative`.
#[derive(Debug, Clone, Copy)]
pub struct ScaledTheta {
    pub scale: f64,
    pub value: Complex64,
    pub derivative: Complex64,
}

impl Theta1 {
    pub fn new(tau: Complex64, tol: f64) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::InvalidInput(format!("tau = {tau} not in the upper half plane")));
        }
        let tol = tol.max(1e-18);
        let mut d1 = Complex64::new(0.0, 0.0);
        let mut d3 = Complex64::new(0.0, 0.0);
        for n in 0..MAX_TERMS {
            let h = n as f64 + 0.5;
            let pw = (Complex64::i() * PI * tau * h * h).exp();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let k = 2.0 * h;
            d1 += pw * (2.0 * sign * k);
            d3 -= pw * (2.0 * sign * k * k * k);
            if pw.norm() * k * k * k < tol * 1e-3 * d1.norm().min(1.0) {
                break;
            }
        }
        Ok(Self { tau, tol, d1_at_zero: d1, d3_at_zero: d3 })
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    /// Scaled evaluation of `theta1` and `theta1'` at `v`; safe for large
    /// `|Im v|`, accurate for tiny `v`.
    pub fn eval(&self, v: Complex64) -> ScaledTheta {
        // Each term is coefficient * exp(exponent).
        let mut terms: Vec<(Complex64, Complex64, Complex64)> = Vec::with_capacity(16);
        let mut best = f64::NEG_INFINITY;
        let mut prev = f64::INFINITY;
        let cutoff = self.tol.max(1e-18).ln() - 10.0;
        for n in 0..MAX_TERMS {
            let h = n as f64 + 0.5;
            let k = 2.0 * h;
            let sign = if n % 2 == 0 { 2.0 } else { -2.0 };
            let base = Complex64::i() * PI * self.tau * h * h;
            let w = v * k;
            let (expo, cs, cc) = if w.im.abs() <= 30.0 {
                (base, w.sin() * sign, w.cos() * (sign * k))
            } else if w.im > 0.0 {
                // sin w ~ (i/2) e^{-iw}, cos w ~ e^{-iw}/2
                let e = base - Complex64::i() * w;
                (e, Complex64::new(0.0, 0.5) * sign, Complex64::new(0.5, 0.0) * (sign * k))
            } else {
                let e = base + Complex64::i() * w;
                (e, Complex64::new(0.0, -0.5) * sign, Complex64::new(0.5, 0.0) * (sign * k))
            };
            let mag = expo.re + cs.norm().max(cc.norm()).ln();
            terms.push((expo, cs, cc));
            best = best.max(mag);
            if n > 0 && mag < prev && mag < best + cutoff {
                break;
            }
            prev = mag;
        }
        let mut value = Complex64::new(0.0, 0.0);
        let mut derivative = Complex64::new(0.0, 0.0);
        for (expo, cs, cc) in terms {
            let f = (expo - best).exp();
            value += cs * f;
            derivative += cc * f;
        }
        ScaledTheta { scale: best, value, derivative }
    }
}
