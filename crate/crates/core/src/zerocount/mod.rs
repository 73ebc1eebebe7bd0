//! Zeroes of `F(z) = P(z, sigma(z))`: argument-principle counting on disks,
//! the polynomial zero-estimate shape, and a Jensen-formula bound.

mod jensen;
mod poly;

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

pub use jensen::{jensen_pipeline, JensenParams, JensenReport, Witness};
pub use poly::BivariatePoly;

use crate::elliptic::SigmaEvaluator;
use crate::error::{Error, Result};

/// Constant for the zero-estimate shape `c L (R + sqrt L)^2 log(R + L)`,
/// calibrated on random integer polynomials with `L <= 4`, `R in [2, 6]`
/// over the square lattice (largest observed ratio times 1.25, seed
/// [`CALIBRATION_SEED`]), then frozen.
pub const BESSON_C: f64 = 1.88;

/// Contour radii tried: `R + k * PERTURB_STEP` for `k < PERTURB_ATTEMPTS`.
pub const PERTURB_STEP: f64 = 5e-5;
pub const PERTURB_ATTEMPTS: usize = 20;
/// Minimal distance from the contour to a zero of `F`, estimated by `|F/F'|`.
pub const CONTOUR_CLEARANCE: f64 = 1e-6;
/// Largest accepted distance of the winding integral from an integer.
pub const WINDING_RESIDUAL_LIMIT: f64 = 0.05;

const MAX_INTERVALS: usize = 400_000;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCountReport {
    pub count: usize,
    /// Contour radius actually used.
    pub radius: f64,
    pub requested_radius: f64,
    pub besson_bound: Option<f64>,
    pub jensen_bound: Option<f64>,
    pub winding_residual: f64,
    pub attempts: usize,
    pub intervals: usize,
}

/// `c L (R + sqrt L)^2 log(R + L)`.
pub fn besson_bound(l: usize, r: f64, c: f64) -> Result<f64> {
    if l < 1 {
        return Err(Error::DomainViolation("L >= 1 required".into()));
    }
    if !(r >= 2.0) {
        return Err(Error::DomainViolation(format!("R >= 2 required, got {r}")));
    }
    if !(c > 0.0) {
        return Err(Error::DomainViolation("c > 0 required".into()));
    }
    let lf = l as f64;
    Ok(c * lf * (r + lf.sqrt()).powi(2) * (r + lf).ln())
}

/// `log F(z)` and `F'(z)/F(z)`.
pub(crate) fn log_f(ev: &SigmaEvaluator, p: &BivariatePoly, z: Complex64) -> Result<(Complex64, Complex64)> {
    if p.deg_y() == 0 {
        return Ok(p.log_eval(z, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)));
    }
    let (ls, zeta) = ev.log_sigma_and_zeta(z)?;
    Ok(p.log_eval(z, ls, zeta))
}

/// Number of zeroes of `P(z, sigma(z))` in `|z| <= R`, by the argument
/// principle on `|z| = R'` with `R' >= R` perturbed slightly when the contour
/// passes too close to a zero. `besson_c` sets the reported zero-estimate
/// bound (only evaluated for `R >= 2`).
pub fn count_zeros(ev: &SigmaEvaluator, p: &BivariatePoly, r: f64, tol: f64, besson_c: f64) -> Result<ZeroCountReport> {
    if !(r >= 0.1) {
        return Err(Error::InvalidInput(format!("radius {r} below 0.1")));
    }
    let lattice_radii: Vec<f64> = if p.deg_y() > 0 {
        ev.lattice().points_within(r + 1.0).iter().map(|w| w.2.norm()).collect()
    } else {
        Vec::new()
    };
    for attempt in 0..PERTURB_ATTEMPTS {
        let rr = r + attempt as f64 * PERTURB_STEP;
        if lattice_radii.iter().any(|&m| (m - rr).abs() < CONTOUR_CLEARANCE) {
            continue;
        }
        let Some((n, intervals)) = winding_number(ev, p, rr, tol)? else {
            continue;
        };
        let count = n.re.round();
        let residual = (n.re - count).abs() + n.im.abs();
        if residual >= WINDING_RESIDUAL_LIMIT || count < 0.0 {
            continue;
        }
        let besson = if r >= 2.0 { Some(besson_bound(p.l(), rr, besson_c)?) } else { None };
        return Ok(ZeroCountReport {
            count: count as usize,
            radius: rr,
            requested_radius: r,
            besson_bound: besson,
            jensen_bound: None,
            winding_residual: residual,
            attempts: attempt + 1,
            intervals,
        });
    }
    Err(Error::ContourStuck { radius: r })
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
const GK_NODES: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const GK_WEIGHTS: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const G_WEIGHTS: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

enum Panel {
    Done(Complex64, f64),
    NearZero,
}

/// Integrates `g` over `[a, b]` with one GK15 panel; `None` from `g` means
/// the contour is too close to a zero.
fn gk15(g: &impl Fn(f64) -> Option<Complex64>, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut kronrod = Complex64::new(0.0, 0.0);
    let mut gauss = Complex64::new(0.0, 0.0);
    for k in 0..8 {
        let x = GK_NODES[k] * h;
        let pts: &[f64] = if k == 7 { &[0.0] } else { &[-1.0, 1.0] };
        for &s in pts {
            let Some(v) = g(c + s * x) else {
                return Panel::NearZero;
            };
            kronrod += v * GK_WEIGHTS[k];
            if k % 2 == 1 {
                gauss += v * G_WEIGHTS[k / 2];
            }
        }
    }
    Panel::Done(kronrod * h, ((kronrod - gauss) * h).norm())
}

/// Relative accuracy of the integrand near lattice points, where `z - w`
/// cancels; panels are not refined below it.
const QUAD_REL_FLOOR: f64 = 1e-10;

enum Failure {
    NearZero,
    Budget,
}

fn adaptive(
    g: &impl Fn(f64) -> Option<Complex64>,
    a: f64,
    b: f64,
    tol: f64,
    budget: usize,
) -> std::result::Result<(Complex64, usize), Failure> {
    let mut stack = vec![(a, b, tol)];
    let mut total = Complex64::new(0.0, 0.0);
    let mut intervals = 0;
    while let Some((lo, hi, t)) = stack.pop() {
        intervals += 1;
        if intervals > budget {
            return Err(Failure::Budget);
        }
        match gk15(g, lo, hi) {
            Panel::NearZero => return Err(Failure::NearZero),
            Panel::Done(v, err) => {
                if err <= t.max(QUAD_REL_FLOOR * v.norm()) || hi - lo < 1e-12 {
                    total += v;
                } else {
                    let mid = 0.5 * (lo + hi);
                    stack.push((mid, hi, 0.5 * t));
                    stack.push((lo, mid, 0.5 * t));
                }
            }
        }
    }
    Ok((total, intervals))
}

/// `(1/2 pi i) \oint F'/F dz` over `|z| = r`; `None` when a zero is too close
/// to the contour. Errors with `PrecisionUnreachable` when the quadrature
/// budget runs out.
fn winding_number(ev: &SigmaEvaluator, p: &BivariatePoly, r: f64, tol: f64) -> Result<Option<(Complex64, usize)>> {
    let g = |theta: f64| -> Option<Complex64> {
        let z = Complex64::from_polar(r, theta);
        let (lf, ratio) = log_f(ev, p, z).ok()?;
        if !lf.re.is_finite() || !ratio.is_finite() || ratio.norm() * CONTOUR_CLEARANCE > 1.0 {
            return None;
        }
        Some(ratio * z / (2.0 * PI))
    };
    let panels = 64usize.max((8.0 * r * r.max(1.0)).ceil() as usize);
    let width = 2.0 * PI / panels as f64;
    let quad_tol = tol.clamp(1e-9, 1e-6) / panels as f64;
    let parts: Vec<_> = (0..panels)
        .into_par_iter()
        .map(|k| adaptive(&g, k as f64 * width, (k + 1) as f64 * width, quad_tol, MAX_INTERVALS / panels))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    let mut intervals = 0;
    for part in parts {
        match part {
            Ok((v, n)) => {
                total += v;
                intervals += n;
            }
            Err(Failure::NearZero) => return Ok(None),
            Err(Failure::Budget) => {
                return Err(Error::PrecisionUnreachable(format!("winding integral on |z| = {r} did not converge")))
            }
        }
    }
    Ok(Some((total, intervals)))
}

/// Maximum of `|sigma|` on `|z| <= s`, attained on the circle `|z| = s`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MaxModulus {
    pub radius: f64,
    pub log_value: f64,
    pub point: Complex64,
}

impl MaxModulus {
    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }
}

pub const CIRCLE_GRID: usize = 720;

/// Local maxima of `f` on the circle `|z - center| = radius`, refined by
/// golden-section search from the best `keep` grid maxima and sorted in
/// decreasing order.
pub fn circle_maxima(
    f: &(impl Fn(Complex64) -> f64 + Sync),
    center: Complex64,
    radius: f64,
    grid: usize,
    keep: usize,
) -> Vec<(f64, Complex64)> {
    let step = 2.0 * PI / grid as f64;
    let at = |theta: f64| {
        let v = f(center + Complex64::from_polar(radius, theta));
        if v.is_nan() {
            f64::NEG_INFINITY
        } else {
            v
        }
    };
    let vals: Vec<f64> = (0..grid).into_par_iter().map(|k| at(k as f64 * step)).collect();
    let mut peaks: Vec<usize> =
        (0..grid).filter(|&k| vals[k] >= vals[(k + grid - 1) % grid] && vals[k] >= vals[(k + 1) % grid]).collect();
    peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]).then(a.cmp(&b)));
    peaks.truncate(keep.max(1));
    let mut out: Vec<(f64, Complex64)> = peaks
        .into_iter()
        .map(|k| {
            let theta0 = k as f64 * step;
            let (theta, v) = golden_max(&at, theta0 - step, theta0 + step, 1e-12);
            let (theta, v) = if v >= vals[k] { (theta, v) } else { (theta0, vals[k]) };
            (v, center + Complex64::from_polar(radius, theta))
        })
        .collect();
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out
}

fn golden_max(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = f(x1);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

fn log_abs_sigma(ev: &SigmaEvaluator, z: Complex64) -> f64 {
    ev.log_sigma(z).map_or(f64::NEG_INFINITY, |l| l.log_abs)
}

/// `max |sigma(z)|` over `|z| <= s`.
pub fn max_modulus_sigma(ev: &SigmaEvaluator, s: f64) -> Result<MaxModulus> {
    if !(s > 0.0) {
        return Err(Error::InvalidInput(format!("radius {s} must be positive")));
    }
    let f = |z: Complex64| log_abs_sigma(ev, z);
    let (log_value, point) = circle_maxima(&f, Complex64::new(0.0, 0.0), s, CIRCLE_GRID, 8)[0];
    Ok(MaxModulus { radius: s, log_value, point })
}

/// Seeds of the polynomial suites used to fix and to check [`BESSON_C`].
pub const CALIBRATION_SEED: u64 = 0xB0_55;
pub const CHECK_SEED: u64 = 0xC4_EC;
/// Safety factor applied to the largest observed ratio when calibrating.
pub const CALIBRATION_MARGIN: f64 = 1.25;

/// `n` random polynomials with `L <= l_max`, coefficients in `[-3, 3]` and
/// radii uniform in `[2, 6]`.
pub fn random_cases(n: usize, l_max: usize, seed: u64) -> Vec<(BivariatePoly, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let p = BivariatePoly::random(&mut rng, l_max, 3);
            let r = rng.random_range(2.0..6.0);
            (p, r)
        })
        .collect()
}

/// Ratio `count / (L (R + sqrt L)^2 log(R + L))` for one count.
pub fn besson_ratio(report: &ZeroCountReport, l: usize) -> Result<f64> {
    Ok(report.count as f64 / besson_bound(l, report.radius, 1.0)?)
}

/// `CALIBRATION_MARGIN` times the largest ratio over the given cases.
pub fn calibrate_besson(ev: &SigmaEvaluator, cases: &[(BivariatePoly, f64)], tol: f64) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for (p, r) in cases {
        let rep = count_zeros(ev, p, *r, tol, 1.0)?;
        worst = worst.max(besson_ratio(&rep, p.l())?);
    }
    Ok(CALIBRATION_MARGIN * worst)
}

#[cfg(test)]
mod tests;
