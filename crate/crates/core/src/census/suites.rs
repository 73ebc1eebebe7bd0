use num_complex::Complex64;
use serde::Serialize;

use super::manifest::{config_pairs, parse_value};
use crate::elliptic::{tol_from_digits, SigmaEvaluator, DEFAULT_DIGITS};
use crate::error::{Error, Result};
use crate::growth::{
    certificate_for, delta_check_range, sample_growth, threshold_iteration, DeltaGridReport, GrowthCertificate,
    GrowthSample, DELTA_GRID, IM_TAU_LIMIT,
};
use crate::lattice::Lattice;
use crate::zerocount::{count_zeros, jensen_pipeline, random_cases, BivariatePoly, JensenParams, BESSON_C};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSuiteConfig {
    pub lattice: String,
    pub digits: u32,
    pub seed: u64,
    pub samples: usize,
    pub width: f64,
    pub delta_points: usize,
    pub delta_grid: usize,
}

impl Default for GrowthSuiteConfig {
    fn default() -> Self {
        Self {
            lattice: "1,i".into(),
            digits: DEFAULT_DIGITS,
            seed: 0,
            samples: 1000,
            width: 20.0,
            delta_points: 500,
            delta_grid: DELTA_GRID,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthSuiteReport {
    pub tau: Complex64,
    pub certificate: GrowthCertificate,
    pub iteration: Vec<f64>,
    pub delta_grid: DeltaGridReport,
    pub sample: GrowthSample,
}

impl GrowthSuiteConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "lattice" => self.lattice = value.trim().to_string(),
            "digits" => self.digits = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "samples" => self.samples = parse_value(key, value)?,
            "width" => self.width = parse_value(key, value)?,
            "delta_points" => self.delta_points = parse_value(key, value)?,
            "delta_grid" => self.delta_grid = parse_value(key, value)?,
            _ => return Err(Error::InvalidInput(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (k, v) in config_pairs(text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }
}

/// Growth certificate, threshold iteration, discriminant survey and sampled
/// growth inequality for one lattice.
pub fn run_growth_suite(cfg: &GrowthSuiteConfig) -> Result<GrowthSuiteReport> {
    let lat = Lattice::parse(&cfg.lattice)?;
    let tol = tol_from_digits(cfg.digits);
    if lat.tau().im > IM_TAU_LIMIT {
        return Err(Error::ImTauTooLarge { im_tau: lat.tau().im });
    }
    let ev = SigmaEvaluator::new(&lat, tol)?;
    let certificate = certificate_for(&ev, cfg.delta_grid)?;
    let delta_grid = delta_check_range(3f64.sqrt() / 2.0, IM_TAU_LIMIT, cfg.delta_points, tol)?;
    let sample = sample_growth(&ev, &certificate, cfg.samples, cfg.width, cfg.seed)?;
    Ok(GrowthSuiteReport { tau: lat.tau(), certificate, iteration: threshold_iteration(4), delta_grid, sample })
}

/// Zero-count experiment settings. Polynomials are separated by `;` and
/// radii by `,` in the configuration text.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroExperimentConfig {
    pub lattice: String,
    pub digits: u32,
    pub polys: Vec<String>,
    pub radii: Vec<f64>,
    pub random: usize,
    pub seed: u64,
    pub l_max: usize,
    pub besson_c: f64,
    pub quad_tol: f64,
    pub jensen: bool,
    pub jensen_h: f64,
    pub jensen_d: usize,
    pub jensen_c_inner: f64,
}

impl Default for ZeroExperimentConfig {
    fn default() -> Self {
        Self {
            lattice: "1,i".into(),
            digits: DEFAULT_DIGITS,
            polys: vec!["Y".into()],
            radii: vec![1.5],
            random: 0,
            seed: 0,
            l_max: 4,
            besson_c: BESSON_C,
            quad_tol: 1e-8,
            jensen: false,
            jensen_h: 3.0,
            jensen_d: 1,
            jensen_c_inner: 1.0,
        }
    }
}

impl ZeroExperimentConfig {
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "lattice" => self.lattice = value.trim().to_string(),
            "digits" => self.digits = parse_value(key, value)?,
            "polys" => self.polys = value.split(';').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect(),
            "radii" => self.radii = value.split(',').map(|s| parse_value::<f64>(key, s)).collect::<Result<_>>()?,
            "random" => self.random = parse_value(key, value)?,
            "seed" => self.seed = parse_value(key, value)?,
            "l_max" => self.l_max = parse_value(key, value)?,
            "besson_c" => self.besson_c = parse_value(key, value)?,
            "quad_tol" => self.quad_tol = parse_value(key, value)?,
            "jensen" => self.jensen = parse_value(key, value)?,
            "jensen_h" => self.jensen_h = parse_value(key, value)?,
            "jensen_d" => self.jensen_d = parse_value(key, value)?,
            "jensen_c_inner" => self.jensen_c_inner = parse_value(key, value)?,
            _ => return Err(Error::InvalidInput(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn apply_config(&mut self, text: &str) -> Result<()> {
        for (k, v) in config_pairs(text)? {
            self.set(&k, &v)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroRow {
    pub poly: String,
    pub l: usize,
    pub requested_radius: f64,
    pub radius: f64,
    pub count: usize,
    pub winding_residual: f64,
    pub besson_bound: Option<f64>,
    pub jensen_bound: Option<f64>,
    pub jensen_error: Option<String>,
}

/// One row per `(P, R)`: the listed polynomials at every listed radius, then
/// `random` seeded random polynomials with their own radii in `[2, 6]`.
pub fn run_zero_experiment(cfg: &ZeroExperimentConfig) -> Result<Vec<ZeroRow>> {
    let lat = Lattice::parse(&cfg.lattice)?;
    let ev = SigmaEvaluator::new(&lat, tol_from_digits(cfg.digits))?;
    let mut cases = Vec::new();
    for p in &cfg.polys {
        let poly = BivariatePoly::parse(p)?;
        for &r in &cfg.radii {
            cases.push((poly.clone(), r));
        }
    }
    cases.extend(random_cases(cfg.random, cfg.l_max, cfg.seed));
    let mut rows = Vec::with_capacity(cases.len());
    for (p, r) in cases {
        let rep = count_zeros(&ev, &p, r, cfg.quad_tol, cfg.besson_c)?;
        let (jensen_bound, jensen_error) = if cfg.jensen {
            let params =
                JensenParams { c_inner: cfg.jensen_c_inner, ..JensenParams::new(p.l(), cfg.jensen_h, cfg.jensen_d, r) };
            match jensen_pipeline(&ev, &p, &params) {
                Ok(j) => (Some(j.bound), None),
                Err(e) => (None, Some(e.to_string())),
            }
        } else {
            (None, None)
        };
        rows.push(ZeroRow {
            poly: p.to_string(),
            l: p.l(),
            requested_radius: r,
            radius: rep.radius,
            count: rep.count,
            winding_residual: rep.winding_residual,
            besson_bound: rep.besson_bound,
            jensen_bound,
            jensen_error,
        });
    }
    Ok(rows)
}
