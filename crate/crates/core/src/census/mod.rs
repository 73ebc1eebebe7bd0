//! Reproducible censuses of algebraic points on the graph of sigma, written
//! as JSON lines: a manifest line, one record per enumerated `z` in
//! canonical order, and a summary line.
//!
//! Detections are labelled candidates: finite precision cannot certify that
//! `sigma(z)` is algebraic, and such points are expected to be rare.

mod manifest;
mod suites;

use std::io::Write;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

pub use manifest::{CensusMode, RunManifest};
pub use suites::{
    run_growth_suite, run_zero_experiment, GrowthSuiteConfig, GrowthSuiteReport, ZeroExperimentConfig, ZeroRow,
};

use crate::algebraic::{detect_algebraic, enumerate_blocks, AlgebraicNumber};
use crate::bounds::{eval_bound, BoundId, BoundValue};
use crate::elliptic::{tol_from_digits, SigmaEvaluator};
use crate::error::{Error, Result};
use crate::exact::GaussianRational;
use crate::lattice::{exact_coordinates, reduce_to_cell, Lattice};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub minpoly: Vec<i64>,
    pub root_index: usize,
    pub degree: usize,
    pub height: f64,
    pub distance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectionStatus {
    /// A nearby algebraic number of admissible degree and height was found.
    Candidate,
    None,
    /// `|sigma(z)| > H^d`, so `sigma(z)` cannot have degree `<= d` and height `<= H`.
    SkippedLarge,
    /// `z` is a lattice point and `sigma(z) = 0`.
    LatticeZero,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRecord {
    pub z: String,
    pub minpoly: Vec<i64>,
    pub root_index: usize,
    pub z_approx: [f64; 2],
    pub d: usize,
    pub height: f64,
    pub in_lattice: bool,
    pub sigma_log_abs: Option<f64>,
    pub sigma_arg: Option<f64>,
    pub sigma_approx: Option<[f64; 2]>,
    pub detection: DetectionStatus,
    pub candidate: Option<Candidate>,
    pub radius_class: &'static str,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusSummary {
    pub records: u64,
    pub enumerated: u64,
    pub excluded_lattice: u64,
    pub lattice_zeroes: u64,
    pub skipped_large: u64,
    pub candidates: u64,
    /// Always zero: numerical agreement is never taken as proof.
    pub certified_hits: u64,
    pub bound_id: BoundId,
    pub bound: Option<BoundValue>,
    pub bound_error: Option<String>,
    pub periods_radius: Option<f64>,
    pub invariants_radius: Option<f64>,
    pub note: &'static str,
}

const NOTE: &str = "detections are candidates only; finite precision cannot certify algebraicity";

#[derive(Serialize)]
struct ManifestLine<'a> {
    manifest: &'a RunManifest,
}

#[derive(Serialize)]
struct SummaryLine<'a> {
    summary: &'a CensusSummary,
}

/// Exact lattice membership of an algebraic number (only possible for
/// numbers in `Q(i)`); numerical for inexact lattices.
pub fn in_lattice(lat: &Lattice, z: &AlgebraicNumber) -> bool {
    if lat.exact_periods().is_none() {
        return lat.distance_to_lattice(z.approx) <= 1e-9 * lat.period_scale();
    }
    let Some(g) = gaussian_value(z) else {
        return false;
    };
    exact_coordinates(lat, &g).is_some()
}

/// `z` as a Gaussian rational when it lies in `Q(i)`.
fn gaussian_value(z: &AlgebraicNumber) -> Option<GaussianRational> {
    let q = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    match *z.minpoly.as_slice() {
        [a0, a1] => Some(GaussianRational::new(q(-a0, a1), q(0, 1))),
        [c0, c1, c2] => {
            let neg_disc = 4 * c0 as i128 * c2 as i128 - (c1 as i128) * (c1 as i128);
            if neg_disc <= 0 {
                return None;
            }
            let s = (neg_disc as f64).sqrt().round() as i128;
            let root = [s - 1, s, s + 1].into_iter().find(|&r| r >= 0 && r * r == neg_disc)?;
            let im = q(root as i64, 2 * c2);
            let im = if z.approx.im < 0.0 { -im } else { im };
            Some(GaussianRational::new(q(-c1, 2 * c2), im))
        }
        _ => None,
    }
}

struct Context {
    ev: SigmaEvaluator,
    manifest: RunManifest,
    log_cap: f64,
    periods_radius: Option<f64>,
    invariants_radius: Option<f64>,
}

impl Context {
    fn radius_class(&self, z: Complex64) -> &'static str {
        let r = z.norm();
        match (self.periods_radius, self.invariants_radius) {
            (None, None) => "unclassified",
            (p, i) => {
                if p.is_some_and(|p| r <= p) {
                    "periods-radius"
                } else if i.is_some_and(|i| r <= i) {
                    "invariants-radius"
                } else {
                    "outside"
                }
            }
        }
    }

    fn record(&self, z: &AlgebraicNumber) -> Result<Option<CensusRecord>> {
        let lat = self.ev.lattice();
        let member = in_lattice(lat, z);
        if member && self.manifest.mode == CensusMode::Periods {
            return Ok(None);
        }
        let mut rec = CensusRecord {
            z: z.minpoly_string(),
            minpoly: z.minpoly.clone(),
            root_index: z.root_index,
            z_approx: [z.approx.re, z.approx.im],
            d: z.degree(),
            height: z.height(),
            in_lattice: member,
            sigma_log_abs: None,
            sigma_arg: None,
            sigma_approx: None,
            detection: DetectionStatus::LatticeZero,
            candidate: None,
            radius_class: self.radius_class(z.approx),
        };
        if member {
            rec.sigma_approx = Some([0.0, 0.0]);
            return Ok(Some(rec));
        }
        let cell = reduce_to_cell(lat, z.approx);
        let ls = self.ev.log_sigma_cell(&cell)?;
        rec.sigma_log_abs = Some(ls.log_abs);
        rec.sigma_arg = Some(ls.arg);
        let sigma = ls.to_complex();
        if sigma.is_finite() {
            rec.sigma_approx = Some([sigma.re, sigma.im]);
        }
        if ls.log_abs > self.log_cap {
            rec.detection = DetectionStatus::SkippedLarge;
            return Ok(Some(rec));
        }
        let m = &self.manifest;
        match detect_algebraic(sigma, m.d_max, m.h_max, m.detect_tol)? {
            Some(a) => {
                rec.detection = DetectionStatus::Candidate;
                rec.candidate = Some(Candidate {
                    distance: (a.approx - sigma).norm(),
                    degree: a.degree(),
                    height: a.height(),
                    minpoly: a.minpoly,
                    root_index: a.root_index,
                });
            }
            None => rec.detection = DetectionStatus::None,
        }
        Ok(Some(rec))
    }
}

fn radius(id: BoundId, m: &RunManifest) -> Option<f64> {
    let a = *m.constants.get("a")?;
    let params = [("d".to_string(), m.d_max as f64), ("h".to_string(), m.h_max)].into_iter().collect();
    let consts = [("a".to_string(), a)].into_iter().collect();
    eval_bound(id, &params, &consts).ok().map(|v| v.value)
}

/// The count bound of the run's mode at `(d_max, H_max)` with the manifest
/// constants.
pub fn summary_bound(m: &RunManifest) -> (BoundId, Result<BoundValue>) {
    let id = match m.mode {
        CensusMode::Periods => BoundId::PeriodsCount,
        CensusMode::Invariants => BoundId::InvariantsCount,
    };
    let params = [("d".to_string(), m.d_max as f64), ("h".to_string(), m.h_max)].into_iter().collect();
    let consts = m
        .constants
        .iter()
        .filter(|(k, _)| id.constants().contains(&k.as_str()))
        .map(|(k, v)| (k.clone(), *v))
        .collect();
    (id, eval_bound(id, &params, &consts))
}

/// Runs a census and writes its JSON lines to `out`.
pub fn run_census<W: Write>(manifest: &RunManifest, out: &mut W) -> Result<CensusSummary> {
    manifest.validate()?;
    let lat = Lattice::parse(&manifest.lattice)?;
    let ev = SigmaEvaluator::new(&lat, tol_from_digits(manifest.digits))?;
    let ctx = Context {
        ev,
        manifest: manifest.clone(),
        log_cap: manifest.d_max as f64 * manifest.h_max.ln() * (1.0 + 1e-9),
        periods_radius: radius(BoundId::PeriodsRadius, manifest),
        invariants_radius: radius(BoundId::InvariantsRadius, manifest),
    };
    let io = |e: std::io::Error| Error::InvalidInput(format!("write failed: {e}"));
    serde_json::to_writer(&mut *out, &ManifestLine { manifest }).map_err(|e| io(e.into()))?;
    out.write_all(b"\n").map_err(io)?;

    let (bound_id, bound) = summary_bound(manifest);
    let mut summary = CensusSummary {
        records: 0,
        enumerated: 0,
        excluded_lattice: 0,
        lattice_zeroes: 0,
        skipped_large: 0,
        candidates: 0,
        certified_hits: 0,
        bound_id,
        bound_error: bound.as_ref().err().map(|e| e.to_string()),
        bound: bound.ok(),
        periods_radius: ctx.periods_radius,
        invariants_radius: ctx.invariants_radius,
        note: NOTE,
    };
    let mut line = Vec::with_capacity(512);
    for block in enumerate_blocks(manifest.d_max, manifest.h_max, manifest.box_cap)? {
        let block = block?;
        let records: Vec<Result<Option<CensusRecord>>> = block
            .par_iter()
            .map(|z| {
                ctx.record(z).map_err(|e| Error::AtPoint {
                    point: format!("{} (root {})", z.minpoly_string(), z.root_index),
                    source: Box::new(e),
                })
            })
            .collect();
        summary.enumerated += block.len() as u64;
        for rec in records {
            let Some(rec) = rec? else {
                summary.excluded_lattice += 1;
                continue;
            };
            summary.records += 1;
            match rec.detection {
                DetectionStatus::Candidate => summary.candidates += 1,
                DetectionStatus::SkippedLarge => summary.skipped_large += 1,
                DetectionStatus::LatticeZero => summary.lattice_zeroes += 1,
                DetectionStatus::None => {}
            }
            line.clear();
            serde_json::to_writer(&mut line, &rec).map_err(|e| io(e.into()))?;
            line.push(b'\n');
            out.write_all(&line).map_err(io)?;
        }
    }
    serde_json::to_writer(&mut *out, &SummaryLine { summary: &summary }).map_err(|e| io(e.into()))?;
    out.write_all(b"\n").map_err(io)?;
    out.flush().map_err(io)?;
    Ok(summary)
}
