//! Closed-form counting, radius and measure bounds, evaluated in log form.
//!
//! Every effective constant is supplied by the caller under a fixed name;
//! nothing here assumes a numerical value for them.

use std::collections::BTreeMap;
use std::f64::consts::E;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::elliptic::SigmaEvaluator;
use crate::error::{Error, Result};
use crate::growth::GrowthCertificate;
use crate::lattice::CellReduction;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundId {
    /// `c d^6 (log d) (log H)^2 log log H`: points of bounded degree and
    /// height on the graph, for algebraic periods.
    PeriodsCount,
    /// `c d^20 (log d)^5 (log H)^2 log log H`: the same for algebraic invariants.
    InvariantsCount,
    /// `c R^10 (log R) d^4 (log H)^2 / log(d log H)`: points in a disk of radius `R`.
    DiskCount,
    /// `A d sqrt(log H)`.
    PeriodsRadius,
    /// `A sqrt(d^9 (log d)^2 log H)`.
    InvariantsRadius,
    /// `-B d^9 (log d)^2 log H`.
    InvariantsGap,
    /// `-c d^4 (log d)^2 (log H) |w|^2 (1 + max(0, log |w|))^3`.
    TranscendenceMeasure,
    /// `c10 sqrt(d^5 (log d)^2 (log H) (1 + d log H)^3)`.
    ExceptionalSet,
    /// `c d^30 (log d)^6 (log H)^3`: the count obtained through Jensen's formula.
    AlternativeCount,
    /// `c_count log((T+1)^4 H^T (c_radius T)^T e^(c_growth T^3))`.
    JensenZeroes,
    /// `sqrt(d log H)`, the smallest admissible `N`.
    MinimalN,
}

impl BoundId {
    pub const ALL: [BoundId; 11] = [
        BoundId::PeriodsCount,
        BoundId::InvariantsCount,
        BoundId::DiskCount,
        BoundId::PeriodsRadius,
        BoundId::InvariantsRadius,
        BoundId::InvariantsGap,
        BoundId::TranscendenceMeasure,
        BoundId::ExceptionalSet,
        BoundId::AlternativeCount,
        BoundId::JensenZeroes,
        BoundId::MinimalN,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundId::PeriodsCount => "periods-count",
            BoundId::InvariantsCount => "invariants-count",
            BoundId::DiskCount => "disk-count",
            BoundId::PeriodsRadius => "periods-radius",
            BoundId::InvariantsRadius => "invariants-radius",
            BoundId::InvariantsGap => "invariants-gap",
            BoundId::TranscendenceMeasure => "transcendence-measure",
            BoundId::ExceptionalSet => "exceptional-set",
            BoundId::AlternativeCount => "alternative-count",
            BoundId::JensenZeroes => "jensen-zeroes",
            BoundId::MinimalN => "minimal-n",
        }
    }

    /// Required parameter names.
    pub fn params(self) -> &'static [&'static str] {
        match self {
            BoundId::DiskCount => &["d", "h", "r"],
            BoundId::TranscendenceMeasure => &["d", "h", "omega"],
            BoundId::JensenZeroes => &["t", "h"],
            _ => &["d", "h"],
        }
    }

    /// Required constant names.
    pub fn constants(self) -> &'static [&'static str] {
        match self {
            BoundId::PeriodsRadius | BoundId::InvariantsRadius => &["a"],
            BoundId::InvariantsGap => &["b"],
            BoundId::ExceptionalSet => &["c10"],
            BoundId::JensenZeroes => &["c_count", "c_radius", "c_growth"],
            BoundId::MinimalN => &[],
            _ => &["c"],
        }
    }
}

impl fmt::Display for BoundId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoundId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BoundId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown bound id '{s}'")))
    }
}

/// `value = sign * exp(log_abs)`; `value` may be infinite when it exceeds
/// the `f64` range, `log_abs` never is.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundValue {
    pub id: BoundId,
    pub value: f64,
    pub log_abs: f64,
    pub sign: f64,
    pub params: BTreeMap<String, f64>,
    pub constants: BTreeMap<String, f64>,
}

impl BoundValue {
    /// `log(value)` for positive values.
    pub fn log_value(&self) -> Option<f64> {
        (self.sign > 0.0).then_some(self.log_abs)
    }
}

fn get(map: &BTreeMap<String, f64>, key: &str, what: &str) -> Result<f64> {
    let v = *map.get(key).ok_or_else(|| Error::InvalidInput(format!("missing {what} '{key}'")))?;
    if !v.is_finite() {
        return Err(Error::InvalidInput(format!("{what} '{key}' is not finite")));
    }
    Ok(v)
}

fn require(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::DomainViolation(msg()))
    }
}

fn positive_log(x: f64, name: &str) -> Result<f64> {
    require(x > 0.0, || format!("{name} must be positive, got {x}"))?;
    Ok(x.ln())
}

/// Evaluates a bound. Unknown parameter or constant names are rejected.
pub fn eval_bound(
    id: BoundId,
    params: &BTreeMap<String, f64>,
    constants: &BTreeMap<String, f64>,
) -> Result<BoundValue> {
    for k in params.keys() {
        if !id.params().contains(&k.as_str()) {
            return Err(Error::InvalidInput(format!("parameter '{k}' not used by {id}")));
        }
    }
    for k in constants.keys() {
        if !id.constants().contains(&k.as_str()) {
            return Err(Error::InvalidInput(format!("constant '{k}' not used by {id}")));
        }
    }
    let cst = |k: &str| -> Result<f64> {
        let v = get(constants, k, "constant")?;
        require(v > 0.0, || format!("constant {k} must be positive, got {v}"))?;
        Ok(v.ln())
    };
    let (log_abs, sign) = match id {
        BoundId::JensenZeroes => {
            let t = get(params, "t", "parameter")?;
            let h = get(params, "h", "parameter")?;
            require(t >= 1.0, || format!("T >= 1 required, got {t}"))?;
            require(h >= 1.0, || format!("H >= 1 required, got {h}"))?;
            let (cc, cr, cg) = (cst("c_count")?, cst("c_radius")?, cst("c_growth")?);
            let inner = 4.0 * (t + 1.0).ln() + t * h.ln() + t * (cr + t.ln()) + cg.exp() * t.powi(3);
            require(inner > 0.0, || "logarithm argument must exceed 1".into())?;
            (cc + inner.ln(), 1.0)
        }
        _ => {
            let d = get(params, "d", "parameter")?;
            let h = get(params, "h", "parameter")?;
            let theorem = matches!(id, BoundId::PeriodsCount | BoundId::InvariantsCount | BoundId::AlternativeCount);
            if theorem {
                require(d >= E, || format!("d >= e required, got {d}"))?;
                require(h >= E.powf(E), || format!("H >= e^e required, got {h}"))?;
            } else {
                require(d >= 1.0, || format!("d >= 1 required, got {d}"))?;
                require(h >= 1.0, || format!("H >= 1 required, got {h}"))?;
            }
            let ld = d.ln();
            let lh = h.ln();
            match id {
                BoundId::PeriodsCount => {
                    (cst("c")? + 6.0 * ld + ld.ln() + 2.0 * lh.ln() + positive_log(lh.ln(), "log log H")?, 1.0)
                }
                BoundId::InvariantsCount => {
                    (cst("c")? + 20.0 * ld + 5.0 * ld.ln() + 2.0 * lh.ln() + positive_log(lh.ln(), "log log H")?, 1.0)
                }
                BoundId::AlternativeCount => (cst("c")? + 30.0 * ld + 6.0 * ld.ln() + 3.0 * lh.ln(), 1.0),
                BoundId::DiskCount => {
                    let r = get(params, "r", "parameter")?;
                    require(r > 1.0, || format!("R > 1 required, got {r}"))?;
                    let dl = d * lh;
                    require(dl > 1.0, || format!("d log H > 1 required, got {dl}"))?;
                    let v = cst("c")? + 10.0 * r.ln() + r.ln().ln() + 4.0 * ld + 2.0 * positive_log(lh, "log H")?
                        - dl.ln().ln();
                    (v, 1.0)
                }
                BoundId::PeriodsRadius => (cst("a")? + ld + 0.5 * positive_log(lh, "log H")?, 1.0),
                BoundId::InvariantsRadius => {
                    (cst("a")? + 0.5 * (9.0 * ld + 2.0 * positive_log(ld, "log d")? + positive_log(lh, "log H")?), 1.0)
                }
                BoundId::InvariantsGap => {
                    (cst("b")? + 9.0 * ld + 2.0 * positive_log(ld, "log d")? + positive_log(lh, "log H")?, -1.0)
                }
                BoundId::TranscendenceMeasure => {
                    let w = get(params, "omega", "parameter")?;
                    require(w > 0.0, || format!("|omega| > 0 required, got {w}"))?;
                    let v = cst("c")?
                        + 4.0 * ld
                        + 2.0 * positive_log(ld, "log d")?
                        + positive_log(lh, "log H")?
                        + 2.0 * w.ln()
                        + 3.0 * (1.0 + w.ln().max(0.0)).ln();
                    (v, -1.0)
                }
                BoundId::ExceptionalSet => {
                    let inner = 5.0 * ld
                        + 2.0 * positive_log(ld, "log d")?
                        + positive_log(lh, "log H")?
                        + 3.0 * (1.0 + d * lh).ln();
                    (cst("c10")? + 0.5 * inner, 1.0)
                }
                BoundId::MinimalN => (0.5 * positive_log(d * lh, "d log H")?, 1.0),
                BoundId::JensenZeroes => unreachable!(),
            }
        }
    };
    Ok(BoundValue {
        id,
        value: sign * log_abs.exp(),
        log_abs,
        sign,
        params: params.clone(),
        constants: constants.clone(),
    })
}

/// Convenience wrapper taking `(name, value)` pairs.
pub fn eval_bound_with(id: BoundId, params: &[(&str, f64)], constants: &[(&str, f64)]) -> Result<BoundValue> {
    let to_map = |kv: &[(&str, f64)]| kv.iter().map(|&(k, v)| (k.to_string(), v)).collect::<BTreeMap<_, _>>();
    eval_bound(id, &to_map(params), &to_map(constants))
}

/// `A = max(sqrt((1 + delta) / c), sqrt((2 + B) / c))`.
pub fn common_radius_constant(b: f64, c: f64, delta: f64) -> Result<f64> {
    require(b > 0.0, || format!("B > 0 required, got {b}"))?;
    require(c > 0.0, || format!("c > 0 required, got {c}"))?;
    require(delta >= 0.0, || format!("delta >= 0 required, got {delta}"))?;
    Ok(((1.0 + delta) / c).sqrt().max(((2.0 + b) / c).sqrt()))
}

/// [`common_radius_constant`] with `c` and `delta` from a growth certificate.
pub fn common_radius_constant_for(b: f64, cert: &GrowthCertificate) -> Result<f64> {
    common_radius_constant(b, cert.c, cert.delta_sigma)
}

/// One inequality of the radius argument, `lhs <= rhs` with `slack = rhs - lhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Link {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

fn link(name: &'static str, lhs: f64, rhs: f64) -> Link {
    Link { name, lhs, rhs, slack: rhs - lhs, holds: lhs <= rhs }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadiusCheck {
    pub a: f64,
    pub a_n: f64,
    pub abs_z: f64,
    /// `false` when `|z| < A N`; no links are evaluated then.
    pub applicable: bool,
    pub links: Vec<Link>,
    pub all_hold: bool,
}

/// Checks numerically, for `z = z0 + m w1 + n w2` with `sigma(z)` of degree
/// `d` and height at most `H`, the chain showing that `|z| >= A N` forces
/// `log |z0| <= -B N^2`:
///
/// * `log |sigma(z)| <= d log H`,
/// * `log |sigma(z0)| + c |z|^2 <= log |sigma(z)|`,
/// * `log |sigma(z0)| <= -delta`,
/// * `|log |sigma(z0)| - log |z0|| <= 1`,
/// * `log |z0| <= -B N^2`.
///
/// The point is passed in cell form so that `z0` keeps full precision.
pub fn common_radius_check(
    ev: &SigmaEvaluator,
    cert: &GrowthCertificate,
    cell: &CellReduction,
    sigma_height: f64,
    sigma_degree: usize,
    b: f64,
    n: f64,
) -> Result<RadiusCheck> {
    let d = sigma_degree as f64;
    let log_h = sigma_height.ln();
    if sigma_degree < 1 || !(sigma_height >= 1.0) {
        return Err(Error::HypothesisUnmet("need degree >= 1 and height >= 1".into()));
    }
    let n_min = (d * log_h).sqrt();
    if !(n >= n_min) {
        return Err(Error::HypothesisUnmet(format!("N = {n} below sqrt(d log H) = {n_min}")));
    }
    let z = cell.reconstruct(ev.lattice());
    let abs_z = z.norm();
    if abs_z < cert.r {
        return Err(Error::HypothesisUnmet(format!("|z| = {abs_z} below the growth radius {}", cert.r)));
    }
    let a = common_radius_constant_for(b, cert)?;
    let a_n = a * n;
    if abs_z < a_n {
        return Ok(RadiusCheck { a, a_n, abs_z, applicable: false, links: Vec::new(), all_hold: true });
    }
    let log_sigma_z = ev.log_sigma_cell(cell)?.log_abs;
    let base = CellReduction { z0: cell.z0, m: 0, n: 0 };
    let log_sigma_z0 = ev.log_sigma_cell(&base)?.log_abs;
    let log_z0 = cell.z0.norm().ln();
    let links = vec![
        link("height", log_sigma_z, d * log_h),
        link("growth", log_sigma_z0 + cert.c * abs_z * abs_z, log_sigma_z),
        link("small-sigma", log_sigma_z0, -cert.delta_sigma),
        link("near-identity", (log_sigma_z0 - log_z0).abs(), 1.0),
        link("conclusion", log_z0, -b * n * n),
    ];
    let all_hold = links.iter().all(|l| l.holds);
    Ok(RadiusCheck { a, a_n, abs_z, applicable: true, links, all_hold })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::build_certificate_with_grid;
    use crate::lattice::Lattice;
    use num_complex::Complex64;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    fn dh(id: BoundId, d: f64, h: f64) -> BoundValue {
        let consts: Vec<(&str, f64)> = id.constants().iter().map(|&k| (k, 1.0)).collect();
        eval_bound_with(id, &[("d", d), ("h", h)], &consts).unwrap()
    }

    #[test]
    fn periods_count_at_the_corner() {
        let v = dh(BoundId::PeriodsCount, E, E.powf(E));
        assert!(rel(v.value, E.powi(8)) < 1e-9);
        assert!((v.value - 2980.96).abs() < 0.01);
        assert!(rel(v.log_value().unwrap(), 8.0) < 1e-12);
    }

    #[test]
    fn domain_guards() {
        let r = eval_bound_with(BoundId::PeriodsCount, &[("d", 2.0), ("h", 100.0)], &[("c", 1.0)]);
        assert!(matches!(r, Err(Error::DomainViolation(m)) if m.contains("d >= e")));
        let r = eval_bound_with(BoundId::InvariantsCount, &[("d", 3.0), ("h", 10.0)], &[("c", 1.0)]);
        assert!(matches!(r, Err(Error::DomainViolation(m)) if m.contains("H >= e^e")));
        let r = eval_bound_with(BoundId::PeriodsCount, &[("d", 3.0), ("h", 100.0)], &[("c", -1.0)]);
        assert!(matches!(r, Err(Error::DomainViolation(_))));
        let r = eval_bound_with(BoundId::PeriodsCount, &[("d", 3.0), ("h", 100.0)], &[("c2", 1.0)]);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
        let r = eval_bound_with(BoundId::PeriodsCount, &[("d", 3.0)], &[("c", 1.0)]);
        assert!(matches!(r, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn disk_count_example() {
        let v = eval_bound_with(BoundId::DiskCount, &[("d", 1.0), ("h", 3.0), ("r", 2.0)], &[("c", 1.0)]).unwrap();
        let l3 = 3f64.ln();
        let expected = 1024.0 * 2f64.ln() * l3 * l3 / l3.ln();
        assert!(rel(v.value, expected) < 1e-12);
    }

    #[test]
    fn transcendence_measure_example() {
        let v =
            eval_bound_with(BoundId::TranscendenceMeasure, &[("d", 3.0), ("h", 3.0), ("omega", 1.0)], &[("c", 1.0)])
                .unwrap();
        let expected = -81.0 * 3f64.ln().powi(2) * 3f64.ln();
        assert!(rel(v.value, expected) < 1e-12);
        assert!((v.value + 107.4).abs() < 0.05);
        assert!(v.log_value().is_none());
    }

    #[test]
    fn exceptional_set_example() {
        let v = dh(BoundId::ExceptionalSet, E, E.powf(E));
        let expected = (E.powi(5) * E * (1.0 + E * E).powi(3)).sqrt();
        assert!(v.value.is_finite() && v.value > 0.0);
        assert!(rel(v.value, expected) < 1e-12);
    }

    #[test]
    fn large_arguments_stay_finite_in_log_form() {
        for id in BoundId::ALL {
            if id == BoundId::JensenZeroes {
                continue;
            }
            let extra: Vec<(&str, f64)> = match id {
                BoundId::DiskCount => vec![("r", 1e3)],
                BoundId::TranscendenceMeasure => vec![("omega", 1e3)],
                _ => vec![],
            };
            let mut params = vec![("d", 1e3), ("h", 1e6)];
            params.extend(extra);
            let consts: Vec<(&str, f64)> = id.constants().iter().map(|&k| (k, 1.0)).collect();
            let v = eval_bound_with(id, &params, &consts).unwrap();
            assert!(v.log_abs.is_finite(), "{id}");
        }
        let big = eval_bound_with(BoundId::AlternativeCount, &[("d", 1e30), ("h", 1e300)], &[("c", 1.0)]).unwrap();
        assert!(big.log_abs.is_finite() && big.value.is_infinite());
    }

    #[test]
    fn jensen_zeroes_formula() {
        let v = eval_bound_with(
            BoundId::JensenZeroes,
            &[("t", 2.0), ("h", 3.0)],
            &[("c_count", 2.0), ("c_radius", 1.5), ("c_growth", 0.5)],
        )
        .unwrap();
        let expected = 2.0 * (81f64 * 9.0 * 9.0 * (0.5f64 * 8.0).exp()).ln();
        assert!(rel(v.value, expected) < 1e-12);
    }

    #[test]
    fn ids_round_trip() {
        for id in BoundId::ALL {
            assert_eq!(id.name().parse::<BoundId>().unwrap(), id);
        }
        assert!("thm1".parse::<BoundId>().is_err());
    }

    #[test]
    fn common_radius_constant_examples() {
        assert!((common_radius_constant(1.0, 1.0, 1.0).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        let v = common_radius_constant(0.5, 4.0, 0.0).unwrap();
        assert!((v - 2.5f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((v - 0.7906).abs() < 1e-4);
        assert!(common_radius_constant(0.0, 1.0, 1.0).is_err());
    }

    fn square_setup() -> (SigmaEvaluator, GrowthCertificate) {
        let lat = Lattice::square();
        (SigmaEvaluator::new(&lat, 1e-30).unwrap(), build_certificate_with_grid(&lat, 1e-30, 100).unwrap())
    }

    #[test]
    fn radius_chain_on_constructed_point() {
        let (ev, cert) = square_setup();
        // z = z0 + 15 + 15i with log|sigma(z)| about log|z0| + 225 pi; the
        // translate must clear the growth radius (about 18.1 here).
        let cell = CellReduction { z0: Complex64::new(1e-305, 3e-306), m: 15, n: 15 };
        let h = 10f64.exp();
        let n = (h.ln()).sqrt();
        let check = common_radius_check(&ev, &cert, &cell, h, 1, 1.0, n).unwrap();
        assert!(check.applicable, "A N = {}", check.a_n);
        for l in &check.links {
            assert!(l.holds && l.slack > 0.0, "{l:?}");
        }
        // Direct oracle for the height link.
        let log_sigma = ev.log_sigma_cell(&cell).unwrap().log_abs;
        let expected = cell.z0.norm().ln() + 225.0 * std::f64::consts::PI;
        assert!((log_sigma - expected).abs() < 1e-6);
    }

    #[test]
    fn radius_chain_vacuous_and_unmet() {
        let (ev, cert) = square_setup();
        let h = 10f64.exp();
        let n = 10.0;
        let cell = CellReduction { z0: Complex64::new(0.1, 0.1), m: 15, n: 15 };
        let check = common_radius_check(&ev, &cert, &cell, h, 1, 1.0, n).unwrap();
        assert!(!check.applicable && check.links.is_empty());
        let r = common_radius_check(&ev, &cert, &cell, h, 1, 1.0, 1.0);
        assert!(matches!(r, Err(Error::HypothesisUnmet(_))));
        let near = CellReduction { z0: Complex64::new(0.1, 0.1), m: 0, n: 0 };
        let r = common_radius_check(&ev, &cert, &near, h, 1, 1.0, 4.0);
        assert!(matches!(r, Err(Error::HypothesisUnmet(_))));
    }

    #[test]
    fn dominance_relations() {
        let e3 = E.powi(3);
        for (d, h) in [(e3, e3), (30.0, 50.0), (100.0, 1e6)] {
            assert!(dh(BoundId::AlternativeCount, d, h).log_abs >= dh(BoundId::InvariantsCount, d, h).log_abs);
        }
        for d in [E, 4.0, 10.0, 100.0] {
            for h in [2.0, 10.0, 1e5] {
                assert!(dh(BoundId::InvariantsRadius, d, h).log_abs >= dh(BoundId::PeriodsRadius, d, h).log_abs);
            }
        }
    }

    proptest! {
        #[test]
        fn monotone_in_d_and_h(d in E..200.0f64, h in E.powf(E)..1e8f64, fd in 1.0..3.0f64, fh in 1.0..3.0f64) {
            for id in BoundId::ALL {
                if id == BoundId::JensenZeroes {
                    continue;
                }
                let consts: Vec<(&str, f64)> = id.constants().iter().map(|&k| (k, 1.0)).collect();
                let eval = |d: f64, h: f64| {
                    let mut params = vec![("d", d), ("h", h)];
                    match id {
                        BoundId::DiskCount => params.push(("r", 3.0)),
                        BoundId::TranscendenceMeasure => params.push(("omega", 2.0)),
                        _ => {}
                    }
                    eval_bound_with(id, &params, &consts).unwrap().log_abs
                };
                let base = eval(d, h);
                prop_assert!(eval(d * fd, h) >= base - 1e-12, "{} in d", id);
                prop_assert!(eval(d, h * fh) >= base - 1e-12, "{} in H", id);
            }
        }

        #[test]
        fn common_radius_constant_monotone(b in 0.01..10.0f64, c in 0.01..10.0f64, delta in 0.0..5.0f64, s in 1.0..2.0f64) {
            let a = common_radius_constant(b, c, delta).unwrap();
            prop_assert!(common_radius_constant(b * s, c, delta).unwrap() >= a);
            prop_assert!(common_radius_constant(b, c, delta * s + 0.01).unwrap() >= a);
            prop_assert!(common_radius_constant(b, c * s, delta).unwrap() <= a);
        }
    }
}
