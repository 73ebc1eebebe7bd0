use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::elliptic::tol_from_digits;
use crate::growth::build_certificate_with_grid;
use crate::lattice::{reduce_basis, reduce_to_cell, Lattice};

fn square_ev() -> SigmaEvaluator {
    SigmaEvaluator::new(&Lattice::square(), tol_from_digits(30)).unwrap()
}

fn skew_lattice() -> Lattice {
    reduce_basis(Complex64::new(1.0, 0.0), Complex64::new(0.3, 1.2)).unwrap()
}

fn y() -> BivariatePoly {
    BivariatePoly::parse("Y").unwrap()
}

#[test]
fn sigma_zeroes_in_disk_of_radius_one_and_a_half() {
    let ev = square_ev();
    let rep = count_zeros(&ev, &y(), 1.5, 1e-8, BESSON_C).unwrap();
    assert_eq!(rep.count, 9);
    assert!(rep.winding_residual < WINDING_RESIDUAL_LIMIT);
    assert_eq!(Lattice::square().points_within(1.5).len(), 9);
}

#[test]
fn identity_polynomial_has_one_zero() {
    for lat in [Lattice::square(), skew_lattice()] {
        let ev = SigmaEvaluator::new(&lat, 1e-30).unwrap();
        let rep = count_zeros(&ev, &BivariatePoly::parse("X").unwrap(), 2.0, 1e-8, BESSON_C).unwrap();
        assert_eq!(rep.count, 1);
    }
}

#[test]
fn sigma_minus_one_has_no_zero_near_origin() {
    let ev = square_ev();
    let rep = count_zeros(&ev, &BivariatePoly::parse("Y - 1").unwrap(), 0.2, 1e-8, BESSON_C).unwrap();
    assert_eq!(rep.count, 0);
    // Oracle: |sigma(z) - 1| stays away from zero on a dense grid of the disk.
    let mut smallest = f64::INFINITY;
    for a in -40..=40 {
        for b in -40..=40 {
            let z = Complex64::new(a as f64, b as f64) * 0.005;
            if z.norm() <= 0.2 {
                smallest = smallest.min((ev.sigma(z) - 1.0).norm());
            }
        }
    }
    assert!(smallest > 0.7, "{smallest}");
}

#[test]
fn counts_match_lattice_points() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for lat in [Lattice::square(), skew_lattice()] {
        let ev = SigmaEvaluator::new(&lat, 1e-30).unwrap();
        for _ in 0..5 {
            let r = rng.random_range(0.5..6.0);
            let rep = count_zeros(&ev, &y(), r, 1e-8, BESSON_C).unwrap();
            assert_eq!(rep.count, lat.points_within(rep.radius).len(), "radius {r}");
        }
    }
}

#[test]
fn contour_through_lattice_points_is_perturbed() {
    let ev = square_ev();
    let rep = count_zeros(&ev, &y(), 1.0, 1e-8, BESSON_C).unwrap();
    assert!(rep.radius > 1.0 && rep.radius <= 1.0 + 1e-3);
    assert_eq!(rep.count, 5);
}

#[test]
fn besson_values() {
    assert!((besson_bound(1, 2.0, 1.0).unwrap() - 9.0 * 3f64.ln()).abs() < 1e-12);
    assert!((besson_bound(1, 2.0, 1.0).unwrap() - 9.8875).abs() < 1e-4);
    assert!((besson_bound(4, 2.0, 1.0).unwrap() - 64.0 * 6f64.ln()).abs() < 1e-12);
    assert!(besson_bound(0, 2.0, 1.0).is_err());
    assert!(besson_bound(1, 1.9, 1.0).is_err());
    assert!(besson_bound(1, 2.0, 0.0).is_err());
    let mut prev = 0.0;
    for l in 1..5 {
        for r in [2.0, 3.0, 5.5] {
            let v = besson_bound(l, r, 1.0).unwrap();
            assert!(v > 0.0);
            assert!(besson_bound(l, r + 0.5, 1.0).unwrap() > v);
            assert!(besson_bound(l + 1, r, 1.0).unwrap() > v);
            assert!(besson_bound(l, r, 2.0).unwrap() > v);
        }
        let v = besson_bound(l, 2.0, 1.0).unwrap();
        assert!(v > prev);
        prev = v;
    }
}

#[test]
fn max_modulus_properties() {
    let ev = square_ev();
    let m: Vec<f64> = [2.0, 4.0, 8.0].iter().map(|&s| max_modulus_sigma(&ev, s).unwrap().log_value).collect();
    assert!(m[0] < m[1] && m[1] < m[2]);
    let small = max_modulus_sigma(&ev, 0.1).unwrap();
    // Oracle: direct evaluation on a fine circle.
    let direct = (0..20000)
        .map(|k| ev.sigma(Complex64::from_polar(0.1, 2.0 * PI * k as f64 / 20000.0)).norm())
        .fold(0.0, f64::max);
    assert!((small.value() - direct).abs() <= 1e-6 * direct);
    assert!((small.value() - 0.1).abs() < 1e-3);

    let cert = build_certificate_with_grid(&Lattice::square(), 1e-30, 100).unwrap();
    for s in [cert.r, cert.r + 1.0, cert.r + 3.0] {
        let mm = max_modulus_sigma(&ev, s).unwrap();
        let z0 = reduce_to_cell(ev.lattice(), mm.point).z0;
        let base = ev.log_sigma(z0).unwrap().log_abs;
        assert!(mm.log_value >= base + cert.c * s * s);
        assert!((mm.point.norm() - s).abs() < 1e-9);
    }
}

#[test]
fn jensen_constant_in_y() {
    let ev = square_ev();
    let p = BivariatePoly::parse("X").unwrap();
    let rep = jensen_pipeline(&ev, &p, &JensenParams::new(1, 2.0, 1, 1.5)).unwrap();
    assert_eq!(rep.k, 0);
    assert_eq!(rep.bound, 1.0);
    assert!(rep.witness.is_none());
    let q = BivariatePoly::parse("X^2 - 9").unwrap();
    let rep = jensen_pipeline(&ev, &q, &JensenParams::new(2, 3.0, 1, 2.0)).unwrap();
    assert_eq!(rep.bound, 0.0);
}

#[test]
fn jensen_bound_for_sigma() {
    let ev = square_ev();
    let rep = jensen_pipeline(&ev, &y(), &JensenParams::new(1, 2.0, 1, 1.5)).unwrap();
    assert!(rep.bound >= 9.0, "{}", rep.bound);
    let w = rep.witness.unwrap();
    assert!(w.abs_r >= 1.0);
    // |P~(w, 1/sigma(w))| recomputed directly.
    let sigma_w = ev.sigma(w.w);
    assert!((y().eval(w.w, sigma_w) / sigma_w).norm() >= 0.5);
    assert!(w.abs_p_tilde >= 0.5);
    assert!(w.w.norm() >= rep.search_inner - 1e-12 && w.w.norm() <= rep.search_outer + 1e-12);
    let mm = max_modulus_sigma(&ev, w.w.norm()).unwrap();
    assert!((mm.log_value - w.log_abs_sigma).abs() < 1e-6);
}

#[test]
fn jensen_rejects_large_coefficients() {
    let ev = square_ev();
    let p = BivariatePoly::parse("1000*Y").unwrap();
    assert!(matches!(jensen_pipeline(&ev, &p, &JensenParams::new(1, 2.0, 1, 1.5)), Err(Error::DomainViolation(_))));
}

#[test]
fn frozen_besson_constant_reproduces() {
    let ev = square_ev();
    let c = calibrate_besson(&ev, &random_cases(30, 4, CALIBRATION_SEED), 1e-8).unwrap();
    assert!(c <= BESSON_C && c > BESSON_C - 0.01, "{c}");
    for (p, r) in random_cases(30, 4, CHECK_SEED) {
        let rep = count_zeros(&ev, &p, r, 1e-8, BESSON_C).unwrap();
        assert!(rep.count as f64 <= rep.besson_bound.unwrap(), "{p}");
    }
}

#[test]
fn jensen_dominates_counts_on_random_cases() {
    let ev = square_ev();
    for (p, r) in random_cases(30, 4, CHECK_SEED) {
        let rep = count_zeros(&ev, &p, r, 1e-8, BESSON_C).unwrap();
        let params = JensenParams::new(p.l(), 3.0, 1, r);
        let j = jensen_pipeline(&ev, &p, &params).unwrap();
        assert!(j.bound >= rep.count as f64, "{p}: {} < {}", j.bound, rep.count);
    }
}

#[test]
fn contour_through_lattice_points_near_zero_pairs() {
    // F has two zeroes within ~1e-11 of every lattice point on |z| = 4.
    let ev = square_ev();
    let p = BivariatePoly::parse("Y^2 - X*Y + 2").unwrap();
    let rep = count_zeros(&ev, &p, 4.0, 1e-8, BESSON_C).unwrap();
    assert!(rep.radius > 4.0 && rep.winding_residual < WINDING_RESIDUAL_LIMIT);
    let inner = count_zeros(&ev, &p, 3.99, 1e-8, BESSON_C).unwrap();
    assert_eq!(rep.count, inner.count + 8);
}
