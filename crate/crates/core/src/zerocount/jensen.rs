use std::f64::consts::{LN_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use super::{circle_maxima, log_abs_sigma, log_f, BivariatePoly, CIRCLE_GRID};
use crate::algebraic::poly::{eval_complex_f, roots_real};
use crate::auxpoly::coefficient_bound_log;
use crate::elliptic::SigmaEvaluator;
use crate::error::{Error, Result};

/// Inputs of the Jensen-formula bound. `c_inner` is the constant in the
/// inner search radius `c_inner T`; the witness search covers
/// `c_inner T <= |w| <= c_inner T + T + 14`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JensenParams {
    pub t: usize,
    pub h: f64,
    pub d: usize,
    pub r1: f64,
    pub c_inner: f64,
    pub step: f64,
    pub angles: usize,
}

impl JensenParams {
    pub fn new(t: usize, h: f64, d: usize, r1: f64) -> Self {
        Self { t, h, d, r1, c_inner: 1.0, step: 0.25, angles: 32 }
    }
}

/// A point where `|sigma(w)| = M(|w|)`, `|R(w)| >= 1` and
/// `|P~(w, 1/sigma(w))| >= 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Witness {
    pub w: Complex64,
    pub log_abs_sigma: f64,
    pub abs_r: f64,
    pub abs_p_tilde: f64,
    pub log_abs_p: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JensenReport {
    /// Degree of `P` in `Y`.
    pub k: usize,
    pub coefficient_cap_log: f64,
    pub witness: Option<Witness>,
    pub search_inner: f64,
    pub search_outer: f64,
    pub circles_searched: usize,
    /// Outer Jensen disk `|z - center| <= radius`; the count is bounded on
    /// the concentric disk of half the radius, which contains `|z| <= r1`.
    pub d2_center: Complex64,
    pub d2_radius: f64,
    pub log_max_d2: f64,
    pub log_abs_f_center: f64,
    /// Upper bound for the number of zeroes of `P(z, sigma(z))` in `|z| <= r1`.
    pub bound: f64,
}

/// Zero bound on `|z| <= r1` from Jensen's formula around a witness point.
///
/// With `k = deg_Y P >= 1`, writes `P~(X, Y) = Y^k P(X, 1/Y)` and
/// `R(X) = P~(X, 0)`, searches outward for a witness `w` maximizing `|sigma|`
/// on its circle with `|R(w)| >= 1` and `|P(w, sigma(w))| >= 1/2`, then bounds
/// the zeroes in `|z - w| <= |w| + r1` by
/// `(log max_{|z-w| = 2(|w|+r1)} |F| - log |F(w)|) / log 2`.
/// For `k = 0` the zeroes of the polynomial `P(X, 0)` are counted directly.
pub fn jensen_pipeline(ev: &SigmaEvaluator, p: &BivariatePoly, params: &JensenParams) -> Result<JensenReport> {
    let JensenParams { t, h, d, r1, c_inner, step, angles } = *params;
    if !p.is_integral() {
        return Err(Error::DomainViolation("integer coefficients required".into()));
    }
    if p.l() > t {
        return Err(Error::DomainViolation(format!("degree {} exceeds T = {t}", p.l())));
    }
    if d < 1 || !(h >= 1.0) || !(r1 > 0.0) || !(step > 0.0) || angles == 0 {
        return Err(Error::DomainViolation("need d >= 1, H >= 1, r1 > 0".into()));
    }
    let cap_log = coefficient_bound_log(d, t, h);
    if p.max_abs().ln() > cap_log + 1e-12 {
        return Err(Error::DomainViolation(format!("max coefficient {} exceeds 2^(1/d) (T+1)^2 H^T", p.max_abs())));
    }
    let k = p.deg_y();
    let inner = (c_inner * t as f64).max(step);
    let outer = c_inner * t as f64 + t as f64 + 14.0;
    let mut report = JensenReport {
        k,
        coefficient_cap_log: cap_log,
        witness: None,
        search_inner: inner,
        search_outer: outer,
        circles_searched: 0,
        d2_center: Complex64::new(0.0, 0.0),
        d2_radius: 0.0,
        log_max_d2: f64::NAN,
        log_abs_f_center: f64::NAN,
        bound: 0.0,
    };
    if k == 0 {
        let roots = roots_real(&p.column(0))?;
        report.bound = roots.iter().filter(|z| z.norm() <= r1 * (1.0 + 1e-12)).count() as f64;
        return Ok(report);
    }

    let r_poly = p.column(k);
    let mut s = inner;
    let mut witness = None;
    while s <= outer + 1e-12 && witness.is_none() {
        report.circles_searched += 1;
        let screen = (0..angles).any(|a| {
            let w = Complex64::from_polar(s, 2.0 * PI * a as f64 / angles as f64);
            eval_complex_f(&r_poly, w).norm() >= 1.0
        });
        if screen {
            witness = find_witness(ev, p, &r_poly, s);
        }
        s += step;
    }
    let Some(wit) = witness else {
        return Err(Error::WitnessNotFound { inner, outer });
    };
    report.witness = Some(wit);

    let center = wit.w;
    let radius = 2.0 * (center.norm() + r1);
    let f = |z: Complex64| log_f(ev, p, z).map_or(f64::NEG_INFINITY, |v| v.0.re);
    let grid = CIRCLE_GRID.max((60.0 * radius).ceil() as usize);
    let log_max = circle_maxima(&f, center, radius, grid, 16)[0].0;
    report.d2_center = center;
    report.d2_radius = radius;
    report.log_max_d2 = log_max;
    report.log_abs_f_center = wit.log_abs_p;
    report.bound = ((log_max - wit.log_abs_p) / LN_2).max(0.0);
    Ok(report)
}

fn find_witness(ev: &SigmaEvaluator, p: &BivariatePoly, r_poly: &[f64], s: f64) -> Option<Witness> {
    let f = |z: Complex64| log_abs_sigma(ev, z);
    let maxima = circle_maxima(&f, Complex64::new(0.0, 0.0), s, CIRCLE_GRID, 8);
    let top = maxima.first()?.0;
    let k = p.deg_y() as f64;
    maxima.iter().take_while(|m| m.0 >= top - 1e-9 * top.abs().max(1.0)).find_map(|&(log_sig, w)| {
        let abs_r = eval_complex_f(r_poly, w).norm();
        if abs_r < 1.0 {
            return None;
        }
        let log_p = log_f(ev, p, w).ok()?.0.re;
        let abs_p_tilde = (log_p - k * log_sig).exp();
        (abs_p_tilde >= 0.5 && log_p >= -LN_2).then_some(Witness {
            w,
            log_abs_sigma: log_sig,
            abs_r,
            abs_p_tilde,
            log_abs_p: log_p,
        })
    })
}
