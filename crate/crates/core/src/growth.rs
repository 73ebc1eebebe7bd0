//! Quadratic growth of `|sigma|` away from the lattice: the threshold
//! iteration on `Im(tau)`, the discriminant of the growth form, and effective
//! growth certificates.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::elliptic::{eisenstein_e2, normalized_quasi_periods, QuasiPeriodData, SigmaEvaluator};
use crate::error::{Error, Result};
use crate::lattice::{reduce_to_cell, CellReduction, Lattice};

/// Largest `Im(tau)` for which certificates are issued (inclusive).
pub const IM_TAU_LIMIT: f64 = 1.9;

const FORMULA_RTOL: f64 = 1e-8;

/// `phi(y) = 24 e^{-2 pi y} / (1 - e^{-2 pi y})^3`.
pub fn phi(y: f64) -> f64 {
    let x = 2.0 * PI * y;
    let denom = -(-x).exp_m1();
    24.0 * (-x).exp() / (denom * denom * denom)
}

/// `y_{n+1} = 6 (1 - phi(y_n)) / (pi (1 + phi(y_n))^2)` from `y_0 = sqrt(3)/2`;
/// returns `y_0 ..= y_steps`.
pub fn threshold_iteration(steps: usize) -> Vec<f64> {
    let mut ys = vec![3f64.sqrt() / 2.0];
    for _ in 0..steps {
        ys.push(threshold_step(*ys.last().expect("nonempty")));
    }
    ys
}

/// Right-hand side of the sufficient condition `y < 6(1 - phi)/(pi (1 + phi)^2)`.
pub fn threshold_step(y: f64) -> f64 {
    let p = phi(y);
    6.0 * (1.0 - p) / (PI * (1.0 + p) * (1.0 + p))
}

/// Coefficients `(a, b, c)` of the growth form
/// `Re[(m eta1 + n eta2)(m/2 + n tau/2)] = a m^2 + b mn + c n^2`.
pub fn growth_form(qp: &QuasiPeriodData, tau: Complex64) -> [f64; 3] {
    [(qp.eta1 * 0.5).re, ((qp.eta1 * tau + qp.eta2) * 0.5).re, (qp.eta2 * tau * 0.5).re]
}

/// Both discriminant formulas: the form discriminant `b^2 - 4ac` and
/// `Im(tau) (|eta1|^2 Im(tau) - 2 pi Re(eta1))`.
pub fn discriminant_pair(qp: &QuasiPeriodData, tau: Complex64) -> (f64, f64) {
    let [a, b, c] = growth_form(qp, tau);
    let first = b * b - 4.0 * a * c;
    let y = tau.im;
    let second = y * (qp.eta1.norm_sqr() * y - 2.0 * PI * qp.eta1.re);
    (first, second)
}

/// Discriminant of the growth form for quasi-periods of `Z + Z tau`.
pub fn discriminant(qp: &QuasiPeriodData, tau: Complex64) -> Result<f64> {
    let (first, second) = discriminant_pair(qp, tau);
    if (first - second).abs() > FORMULA_RTOL * first.abs().max(second.abs()).max(f64::MIN_POSITIVE) {
        return Err(Error::FormulaMismatch { first, second });
    }
    Ok(first)
}

/// Effective constants for `|sigma(z)| >= |sigma(z0)| e^{c |z|^2}`, `|z| >= r`.
///
/// `c1`, `c2` and `delta_disc` refer to the normalized lattice `Z + Z tau`;
/// `c`, `r` and `delta_sigma` to the lattice itself. `upper_log_c1` and
/// `upper_c2` give the global bound `log |sigma(z)| <= upper_log_c1 + upper_c2 |z|^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthCertificate {
    pub delta_disc: f64,
    pub c1: f64,
    pub c2: f64,
    pub c: f64,
    pub r: f64,
    pub delta_sigma: f64,
    pub upper_log_c1: f64,
    pub upper_c2: f64,
    pub tau: Complex64,
    pub omega1: Complex64,
}

impl GrowthCertificate {
    /// `c |z|^2`, the certified lower bound for `log|sigma(z)| - log|sigma(z0)|`.
    pub fn lower_gain(&self, z: Complex64) -> f64 {
        self.c * z.norm_sqr()
    }

    /// Global upper bound for `log |sigma(z)|`.
    pub fn upper_log_bound(&self, z: Complex64) -> f64 {
        self.upper_log_c1 + self.upper_c2 * z.norm_sqr()
    }
}

/// Grid resolution used for `delta_sigma`; the result is re-verified on a grid
/// refined by `DELTA_REFINE` in each direction.
pub const DELTA_GRID: usize = 400;
pub const DELTA_REFINE: usize = 4;

pub fn build_certificate(lat: &Lattice, tol: f64) -> Result<GrowthCertificate> {
    build_certificate_with_grid(lat, tol, DELTA_GRID)
}

pub fn build_certificate_with_grid(lat: &Lattice, tol: f64, grid: usize) -> Result<GrowthCertificate> {
    let ev = SigmaEvaluator::new(lat, tol)?;
    certificate_for(&ev, grid)
}

/// Certificate for the evaluator's lattice.
pub fn certificate_for(ev: &SigmaEvaluator, grid: usize) -> Result<GrowthCertificate> {
    let lat = ev.lattice();
    let tau = lat.tau();
    if tau.im > IM_TAU_LIMIT {
        return Err(Error::ImTauTooLarge { im_tau: tau.im });
    }
    let qp = ev.normalized_quasi_periods();
    let delta = discriminant(qp, tau)?;
    if delta >= 0.0 {
        return Err(Error::PositiveDiscriminant(delta));
    }
    let [a, b, cq] = growth_form(qp, tau);
    let c1 = (delta / (4.0 * cq)).abs().min((delta / (4.0 * a)).abs());
    let k = 1.0 + tau.norm();
    let eta_max = qp.eta1.norm().max(qp.eta2.norm());
    let c2 = k * eta_max;
    let c_norm = c1 / (2.0 * k * k);
    let rho = 0.5 * (1.0 + tau).norm().max((1.0 - tau).norm());
    let r_norm = certified_radius(c1, c2, k, rho);

    // Global upper bound on the normalized lattice.
    let cos_c = tau.norm().max(1.0) / tau.im;
    let a2 = a.abs() + b.abs() + cq.abs();
    let s_max = boundary_max_log_abs(ev, 4000) + 1e-3;
    let quad = a2 * cos_c * cos_c;
    let lin = c2 * cos_c;
    let upper_c2_norm = 2.0 * quad + lin;
    let upper_log_c1_norm = s_max + 2.0 * quad * rho * rho + lin * (rho + 0.25);

    let w1 = lat.omega1();
    let scale2 = w1.norm_sqr();
    let log_w1 = w1.norm().ln();
    Ok(GrowthCertificate {
        delta_disc: delta,
        c1,
        c2,
        c: c_norm / scale2,
        r: r_norm * w1.norm(),
        delta_sigma: delta_sigma(ev, grid, DELTA_REFINE),
        upper_log_c1: upper_log_c1_norm + log_w1,
        upper_c2: upper_c2_norm / scale2,
        tau,
        omega1: w1,
    })
}

/// Smallest `x >= 1` such that every `|z| >= x` satisfies
/// `c1 M^2 - c2 M >= c |z|^2` for all `M >= (|z| - rho)/k`, where
/// `c = c1 / (2 k^2)`.
fn certified_radius(c1: f64, c2: f64, k: f64, rho: f64) -> f64 {
    // With beta = c2 k / c1 the condition at the boundary M is
    // x^2 - 2(2 rho + beta) x + 2(rho^2 + beta rho) >= 0.
    let beta = c2 * k / c1;
    let b = 2.0 * rho + beta;
    let cc = rho * rho + beta * rho;
    let disc = (b * b - 2.0 * cc).max(0.0);
    1f64.max(b + disc.sqrt()).max(rho + beta / 2.0)
}

/// Maximum of `log|sigma|` over the boundary of the normalized cell.
fn boundary_max_log_abs(ev: &SigmaEvaluator, samples_per_side: usize) -> f64 {
    let lat = ev.lattice();
    let verts = lat.cell_vertices();
    (0..4)
        .flat_map(|side| (0..samples_per_side).map(move |i| (side, i)))
        .map(|(side, i)| {
            let (p, q) = (verts[side], verts[(side + 1) % 4]);
            let t = i as f64 / samples_per_side as f64;
            let z = p + (q - p) * t;
            let cell = CellReduction { z0: z, m: 0, n: 0 };
            ev.log_sigma_cell(&cell).map(|l| l.log_abs).unwrap_or(f64::NEG_INFINITY) - lat.omega1().norm().ln()
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Cell-centred grid over the fundamental parallelogram: `(w, log|sigma(w)|)`.
fn cell_grid(ev: &SigmaEvaluator, n: usize) -> Vec<(Complex64, f64)> {
    let lat = ev.lattice();
    (0..n * n)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            let s = -0.5 + (i as f64 + 0.5) / n as f64;
            let t = -0.5 + (j as f64 + 0.5) / n as f64;
            let w = lat.omega1() * s + lat.omega2() * t;
            let cell = CellReduction { z0: w, m: 0, n: 0 };
            let l = ev.log_sigma_cell(&cell).map(|l| l.log_abs).unwrap_or(f64::NEG_INFINITY);
            (w, l)
        })
        .collect()
}

/// Smallest `k/10` below which `|log|sigma(w)| - log|w|| > 1` never happens on the grid.
fn required_tenths(points: &[(Complex64, f64)]) -> i64 {
    let worst =
        points.iter().filter(|(w, l)| (l - w.norm().ln()).abs() > 1.0).map(|&(_, l)| l).fold(f64::INFINITY, f64::min);
    if worst.is_finite() {
        ((-10.0 * worst).floor() as i64 + 1).max(1)
    } else {
        1
    }
}

/// A `delta > 0` with `|log|sigma(w)| - log|w|| <= 1` whenever `w` lies in the
/// fundamental parallelogram and `log|sigma(w)| <= -delta`.
pub fn delta_sigma(ev: &SigmaEvaluator, grid: usize, refine: usize) -> f64 {
    let coarse = required_tenths(&cell_grid(ev, grid));
    let fine = required_tenths(&cell_grid(ev, grid * refine.max(1)));
    coarse.max(fine) as f64 / 10.0
}

/// Outcome of sampling the growth inequality.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSample {
    pub samples: usize,
    pub violations: usize,
    pub min_slack: f64,
    pub r_min: f64,
    pub r_max: f64,
}

/// Checks `log|sigma(z)| >= log|sigma(z0)| + c |z|^2` at `samples` points drawn
/// uniformly from the annulus `r <= |z| <= r + width`.
pub fn sample_growth(
    ev: &SigmaEvaluator,
    cert: &GrowthCertificate,
    samples: usize,
    width: f64,
    seed: u64,
) -> Result<GrowthSample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (r0, r1) = (cert.r, cert.r + width);
    let mut violations = 0;
    let mut min_slack = f64::INFINITY;
    for _ in 0..samples {
        let rad = rng.random_range(r0 * r0..=r1 * r1).sqrt();
        let z = Complex64::from_polar(rad, rng.random_range(-PI..PI));
        let cell = reduce_to_cell(ev.lattice(), z);
        if cell.z0 == Complex64::new(0.0, 0.0) {
            continue;
        }
        let full = ev.log_sigma_cell(&cell)?.log_abs;
        let base = ev.log_sigma_cell(&CellReduction { m: 0, n: 0, ..cell })?.log_abs;
        let slack = full - base - cert.lower_gain(z);
        if slack < 0.0 {
            violations += 1;
        }
        min_slack = min_slack.min(slack);
    }
    Ok(GrowthSample { samples, violations, min_slack, r_min: r0, r_max: r1 })
}

/// Sign survey of the discriminant over a grid of the fundamental domain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaGridReport {
    pub points: usize,
    pub y_lo: f64,
    pub y_hi: f64,
    pub min_delta: f64,
    pub max_delta: f64,
    /// Points with `Im(tau) <= 1.9` and `delta > -1e-6`.
    pub violations: usize,
    pub max_formula_rel_diff: f64,
    /// Points with `Im(tau) <= 1.9` where the sufficient inequality fails.
    pub sufficient_failures: usize,
    /// Points above the certified range; recorded, never asserted.
    pub beyond_limit: usize,
    pub beyond_limit_negative: usize,
}

pub const DELTA_MARGIN: f64 = 1e-6;

/// Evaluates the discriminant at exactly `grid` points `tau = x + iy` with
/// `x` in `[-1/2, 1/2]`, `y` in `[y_lo, y_hi]`, lifted to `|tau| >= 1`.
pub fn delta_check_range(y_lo: f64, y_hi: f64, grid: usize, tol: f64) -> Result<DeltaGridReport> {
    if !(y_lo >= 3f64.sqrt() / 2.0 - 1e-12 && y_lo <= y_hi && grid >= 1) {
        return Err(Error::InvalidInput(format!("bad delta grid [{y_lo}, {y_hi}] x {grid}")));
    }
    let ny = (grid as f64).sqrt().ceil() as usize;
    let nx = grid.div_ceil(ny);
    let taus: Vec<Complex64> = (0..grid)
        .map(|idx| {
            let (i, j) = (idx % nx, idx / nx);
            let x = if nx > 1 { -0.5 + i as f64 / (nx - 1) as f64 } else { 0.0 };
            let y = if ny > 1 { y_lo + (y_hi - y_lo) * j as f64 / (ny - 1) as f64 } else { y_lo };
            Complex64::new(x, y.max((1.0 - x * x).sqrt()))
        })
        .collect();
    let rows: Vec<(f64, f64, f64)> = taus
        .par_iter()
        .map(|&tau| {
            let qp = normalized_quasi_periods(tau, tol)?;
            let (a, b) = discriminant_pair(&qp, tau);
            Ok((tau.im, a, b))
        })
        .collect::<Result<_>>()?;
    let mut report = DeltaGridReport {
        points: rows.len(),
        y_lo,
        y_hi,
        min_delta: f64::INFINITY,
        max_delta: f64::NEG_INFINITY,
        violations: 0,
        max_formula_rel_diff: 0.0,
        sufficient_failures: 0,
        beyond_limit: 0,
        beyond_limit_negative: 0,
    };
    for (y, a, b) in rows {
        report.min_delta = report.min_delta.min(a);
        report.max_delta = report.max_delta.max(a);
        let rel = (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE);
        report.max_formula_rel_diff = report.max_formula_rel_diff.max(rel);
        if y > IM_TAU_LIMIT {
            report.beyond_limit += 1;
            if a < 0.0 {
                report.beyond_limit_negative += 1;
            }
            continue;
        }
        if a > -DELTA_MARGIN {
            report.violations += 1;
        }
        if y >= threshold_step(y) {
            report.sufficient_failures += 1;
        }
    }
    Ok(report)
}

/// `Re(E2(tau)) >= 1 - phi(y)` and `|E2(tau)| <= 1 + phi(y)` at one point.
pub fn e2_within_phi_bounds(tau: Complex64, tol: f64) -> Result<bool> {
    let e2 = eisenstein_e2(tau, tol)?;
    let p = phi(tau.im);
    Ok(e2.re >= 1.0 - p - 1e-12 && e2.norm() <= 1.0 + p + 1e-12)
}
