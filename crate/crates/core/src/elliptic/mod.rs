//! Numerical evaluation of the Weierstrass sigma and zeta functions, the
//! quasi-periods and the invariants `g2`, `g3`.
//!
//! Everything is computed on the normalized lattice `Z + Z tau` (reduced
//! `tau`) and transported by `sigma_L(w1 z) = w1 sigma_{L'}(z)`. Sigma is a
//! theta quotient,
//! `sigma(z) = (1/pi) exp(eta1 z^2 / 2) theta1(pi z) / theta1'(0)`,
//! with quasi-periods in the doubled convention (`zeta(z + w_i) = zeta(z) + eta_i`,
//! `eta1 w2 - eta2 w1 = 2 pi i`).

mod series;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

pub use series::{eisenstein_e2, eisenstein_e4, eisenstein_e6, nome_q, ScaledTheta, Theta1};

use crate::error::{Error, Result};
use crate::lattice::{reduce_to_cell, CellReduction, Lattice};

/// Default working precision in decimal digits.
pub const DEFAULT_DIGITS: u32 = 30;

/// Series truncation target for a number of decimal digits.
pub fn tol_from_digits(digits: u32) -> f64 {
    10f64.powi(-(digits.min(300) as i32))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuasiPeriodData {
    pub eta1: Complex64,
    pub eta2: Complex64,
    pub g2: Complex64,
    pub g3: Complex64,
    /// `E2` at the reduced `tau`.
    pub e2: Complex64,
    /// `e^{2 pi i tau}` at the reduced `tau`.
    pub q: Complex64,
}

impl QuasiPeriodData {
    /// `|eta1 w2 - eta2 w1 - 2 pi i|`.
    pub fn legendre_residual(&self, omega1: Complex64, omega2: Complex64) -> f64 {
        (self.eta1 * omega2 - self.eta2 * omega1 - Complex64::new(0.0, 2.0 * PI)).norm()
    }
}

/// `log |sigma(z)|` and an argument in `(-pi, pi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogSigma {
    pub log_abs: f64,
    pub arg: f64,
}

impl LogSigma {
    fn from_log(l: Complex64) -> Self {
        Self { log_abs: l.re, arg: wrap_angle(l.im) }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::from_polar(self.log_abs.exp(), self.arg)
    }
}

pub fn wrap_angle(a: f64) -> f64 {
    let t = a.rem_euclid(2.0 * PI);
    if t > PI {
        t - 2.0 * PI
    } else {
        t
    }
}

/// Quasi-periods and invariants of the normalized lattice `Z + Z tau`.
pub fn normalized_quasi_periods(tau: Complex64, tol: f64) -> Result<QuasiPeriodData> {
    let e2 = eisenstein_e2(tau, tol)?;
    let e4 = eisenstein_e4(tau, tol)?;
    let e6 = eisenstein_e6(tau, tol)?;
    let eta1 = e2 * (PI * PI / 3.0);
    let eta2 = eta1 * tau - Complex64::new(0.0, 2.0 * PI);
    let pi4 = PI.powi(4);
    Ok(QuasiPeriodData {
        eta1,
        eta2,
        g2: e4 * (4.0 * pi4 / 3.0),
        g3: e6 * (8.0 * pi4 * PI * PI / 27.0),
        e2,
        q: nome_q(tau),
    })
}

/// Quasi-periods and invariants of the lattice itself.
pub fn quasi_periods(lat: &Lattice, tol: f64) -> Result<QuasiPeriodData> {
    let n = normalized_quasi_periods(lat.tau(), tol)?;
    let w = lat.omega1();
    Ok(QuasiPeriodData {
        eta1: n.eta1 / w,
        eta2: n.eta2 / w,
        g2: n.g2 / w.powi(4),
        g3: n.g3 / w.powi(6),
        e2: n.e2,
        q: n.q,
    })
}

/// Per-lattice evaluator; all data is fixed at construction.
#[derive(Debug, Clone)]
pub struct SigmaEvaluator {
    lat: Lattice,
    qp: QuasiPeriodData,
    normalized: QuasiPeriodData,
    theta: Theta1,
    log_d1: Complex64,
    log_omega1: Complex64,
}

impl SigmaEvaluator {
    pub fn new(lat: &Lattice, tol: f64) -> Result<Self> {
        let normalized = normalized_quasi_periods(lat.tau(), tol)?;
        let qp = quasi_periods(lat, tol)?;
        let theta = Theta1::new(lat.tau(), tol)?;
        Ok(Self {
            lat: lat.clone(),
            qp,
            normalized,
            log_d1: theta.d1_at_zero.ln(),
            theta,
            log_omega1: lat.omega1().ln(),
        })
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn quasi_periods(&self) -> &QuasiPeriodData {
        &self.qp
    }

    pub fn normalized_quasi_periods(&self) -> &QuasiPeriodData {
        &self.normalized
    }

    /// `eta1` of the normalized lattice from theta derivatives at zero,
    /// independent of the E2 series.
    pub fn eta1_from_theta(&self) -> Complex64 {
        -self.theta.d3_at_zero * (PI * PI) / (self.theta.d1_at_zero * 3.0)
    }

    /// Complex log of sigma on the normalized lattice, straight from the theta
    /// series at `u` (no reduction). `-inf` real part at zeroes.
    fn normalized_log(&self, u: Complex64) -> (Complex64, ScaledTheta) {
        let th = self.theta.eval(u * PI);
        let log =
            Complex64::new(-PI.ln(), 0.0) + self.normalized.eta1 * u * u * 0.5 + th.scale + th.value.ln() - self.log_d1;
        (log, th)
    }

    fn cell_log(&self, z0: Complex64) -> Complex64 {
        self.log_omega1 + self.normalized_log(z0 / self.lat.omega1()).0
    }

    /// Quasi-periodicity exponent for `z = z0 + m w1 + n w2`:
    /// `(m eta1 + n eta2)(z0 + m w1/2 + n w2/2) + i pi (m + n + mn)`.
    pub fn shift_exponent(&self, cell: &CellReduction) -> Complex64 {
        let (m, n) = (cell.m as f64, cell.n as f64);
        let eta = self.qp.eta1 * m + self.qp.eta2 * n;
        let mid = cell.z0 + self.lat.omega1() * (m / 2.0) + self.lat.omega2() * (n / 2.0);
        let parity = (cell.m + cell.n + cell.m * cell.n).rem_euclid(2) as f64;
        eta * mid + Complex64::new(0.0, PI * parity)
    }

    /// `log sigma` for a point given by its cell decomposition; `z0` is used
    /// as given, so tiny offsets from a lattice point keep full precision.
    pub fn log_sigma_cell(&self, cell: &CellReduction) -> Result<LogSigma> {
        if cell.z0 == Complex64::new(0.0, 0.0) {
            return Err(Error::LatticePoint { distance: 0.0 });
        }
        Ok(LogSigma::from_log(self.cell_log(cell.z0) + self.shift_exponent(cell)))
    }

    /// `log sigma(z)` through reduction into the fundamental parallelogram.
    pub fn log_sigma(&self, z: Complex64) -> Result<LogSigma> {
        let cell = self.guarded_cell(z)?;
        self.log_sigma_cell(&cell)
    }

    fn guarded_cell(&self, z: Complex64) -> Result<CellReduction> {
        let cell = reduce_to_cell(&self.lat, z);
        let distance = self.lat.distance_to_lattice(z);
        if distance <= 1e-8 * self.lat.period_scale() {
            return Err(Error::LatticePoint { distance });
        }
        Ok(cell)
    }

    /// `sigma(z)`; exactly zero on the lattice.
    pub fn sigma(&self, z: Complex64) -> Complex64 {
        let cell = reduce_to_cell(&self.lat, z);
        if cell.z0 == Complex64::new(0.0, 0.0) {
            return Complex64::new(0.0, 0.0);
        }
        (self.cell_log(cell.z0) + self.shift_exponent(&cell)).exp()
    }

    /// `log sigma(z)` from the theta series at the unreduced point. Used to
    /// cross-check the reduction route; accuracy degrades as `|z|` grows.
    pub fn log_sigma_unreduced(&self, z: Complex64) -> LogSigma {
        LogSigma::from_log(self.log_omega1 + self.normalized_log(z / self.lat.omega1()).0)
    }

    /// `sigma(z)` from the unreduced theta series.
    pub fn sigma_unreduced(&self, z: Complex64) -> Complex64 {
        (self.log_omega1 + self.normalized_log(z / self.lat.omega1()).0).exp()
    }

    fn cell_zeta(&self, z0: Complex64) -> Complex64 {
        let u = z0 / self.lat.omega1();
        let th = self.theta.eval(u * PI);
        (self.normalized.eta1 * u + th.derivative / th.value * PI) / self.lat.omega1()
    }

    /// Weierstrass zeta, `sigma'/sigma`.
    pub fn zeta(&self, z: Complex64) -> Result<Complex64> {
        let cell = self.guarded_cell(z)?;
        Ok(self.zeta_cell(&cell))
    }

    fn zeta_cell(&self, cell: &CellReduction) -> Complex64 {
        self.cell_zeta(cell.z0) + self.qp.eta1 * cell.m as f64 + self.qp.eta2 * cell.n as f64
    }

    /// `log sigma(z)` and `zeta(z)` sharing one reduction; no lattice guard
    /// beyond exact coincidence.
    pub fn log_sigma_and_zeta(&self, z: Complex64) -> Result<(Complex64, Complex64)> {
        let cell = reduce_to_cell(&self.lat, z);
        if cell.z0 == Complex64::new(0.0, 0.0) {
            return Err(Error::LatticePoint { distance: 0.0 });
        }
        let log = self.cell_log(cell.z0) + self.shift_exponent(&cell);
        Ok((log, self.zeta_cell(&cell)))
    }
}

pub fn sigma(lat: &Lattice, z: Complex64, tol: f64) -> Result<Complex64> {
    Ok(SigmaEvaluator::new(lat, tol)?.sigma(z))
}

pub fn log_sigma(lat: &Lattice, z: Complex64, tol: f64) -> Result<LogSigma> {
    SigmaEvaluator::new(lat, tol)?.log_sigma(z)
}

pub fn zeta_w(lat: &Lattice, z: Complex64, tol: f64) -> Result<Complex64> {
    SigmaEvaluator::new(lat, tol)?.zeta(z)
}
