//! Period lattices: reduction of a basis to the standard fundamental domain,
//! lattice-vector decomposition and reduction of points into the fundamental
//! parallelogram.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{int_mul, GaussianRational};

/// Tolerance used for the fundamental-domain boundary in floating mode.
const DOMAIN_EPS: f64 = 1e-12;
/// Absolute snap distance for `decompose`.
pub const SNAP_TOL: f64 = 1e-8;

/// A lattice `omega1 Z + omega2 Z` with `tau = omega2 / omega1` reduced into
/// the standard fundamental domain.
///
/// `reduction` maps the input basis to the reduced one:
/// `(omega1, omega2)^T = reduction * (w1, w2)^T`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lattice {
    omega1: Complex64,
    omega2: Complex64,
    tau: Complex64,
    reduction: [[i64; 2]; 2],
    input: (Complex64, Complex64),
    #[serde(skip)]
    exact: Option<ExactPeriods>,
}

#[derive(Debug, Clone, PartialEq)]
struct ExactPeriods {
    input: (GaussianRational, GaussianRational),
    reduced: (GaussianRational, GaussianRational),
}

/// `z = z0 + m * omega1 + n * omega2` with `z0` in the closed fundamental
/// parallelogram spanned by the reduced periods.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CellReduction {
    pub z0: Complex64,
    pub m: i64,
    pub n: i64,
}

impl CellReduction {
    pub fn reconstruct(&self, lat: &Lattice) -> Complex64 {
        self.z0 + lat.omega1 * self.m as f64 + lat.omega2 * self.n as f64
    }
}

fn mat_mul(a: [[i64; 2]; 2], b: [[i64; 2]; 2]) -> [[i64; 2]; 2] {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

const SWAP: [[i64; 2]; 2] = [[0, 1], [1, 0]];
const INVERT: [[i64; 2]; 2] = [[0, 1], [-1, 0]];

fn translate(n: i64) -> [[i64; 2]; 2] {
    [[1, 0], [-n, 1]]
}

fn apply(m: [[i64; 2]; 2], a: Complex64, b: Complex64) -> (Complex64, Complex64) {
    (a * m[0][0] as f64 + b * m[0][1] as f64, a * m[1][0] as f64 + b * m[1][1] as f64)
}

/// Reduces a floating-point period pair.
pub fn reduce_basis(w1: Complex64, w2: Complex64) -> Result<Lattice> {
    if !(w1.is_finite() && w2.is_finite()) || w1.norm() == 0.0 || w2.norm() == 0.0 {
        return Err(Error::DegenerateBasis);
    }
    let ratio = w2 / w1;
    if ratio.im.abs() <= 1e-12 * ratio.norm() {
        return Err(Error::DegenerateBasis);
    }
    let mut m = [[1, 0], [0, 1]];
    if ratio.im < 0.0 {
        m = SWAP;
    }
    let mut steps = 0;
    loop {
        steps += 1;
        if steps > 10_000 {
            return Err(Error::DegenerateBasis);
        }
        let (a, b) = apply(m, w1, w2);
        let tau = b / a;
        if tau.re.abs() > 0.5 + DOMAIN_EPS {
            m = mat_mul(translate(tau.re.round() as i64), m);
            continue;
        }
        if tau.norm_sqr() < 1.0 - DOMAIN_EPS {
            m = mat_mul(INVERT, m);
            continue;
        }
        break;
    }
    let (a, b) = apply(m, w1, w2);
    let tau = b / a;
    if tau.re < -0.5 + DOMAIN_EPS {
        m = mat_mul(translate(-1), m);
    }
    let (a, b) = apply(m, w1, w2);
    let tau = b / a;
    if (tau.norm_sqr() - 1.0).abs() <= DOMAIN_EPS && tau.re < -DOMAIN_EPS {
        m = mat_mul(INVERT, m);
    }
    let (omega1, omega2) = apply(m, w1, w2);
    Ok(Lattice { omega1, omega2, tau: omega2 / omega1, reduction: m, input: (w1, w2), exact: None })
}

fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

fn exact_apply(m: [[i64; 2]; 2], a: &GaussianRational, b: &GaussianRational) -> (GaussianRational, GaussianRational) {
    (&int_mul(m[0][0], a) + &int_mul(m[0][1], b), &int_mul(m[1][0], a) + &int_mul(m[1][1], b))
}

/// Reduces an exact Gaussian-rational period pair; all boundary decisions are
/// made in exact arithmetic.
pub fn reduce_basis_exact(w1: &GaussianRational, w2: &GaussianRational) -> Result<Lattice> {
    if w1.is_zero() || w2.is_zero() {
        return Err(Error::DegenerateBasis);
    }
    let orientation = (w2 * &w1.conj()).im;
    if orientation.is_zero() {
        return Err(Error::DegenerateBasis);
    }
    let mut m = if orientation.is_negative() { SWAP } else { [[1, 0], [0, 1]] };
    let one = BigRational::one();
    let h = half();
    let tau_of = |m: [[i64; 2]; 2]| {
        let (a, b) = exact_apply(m, w1, w2);
        b.div(&a).expect("nonzero period")
    };
    let mut steps = 0;
    loop {
        steps += 1;
        if steps > 10_000 {
            return Err(Error::DegenerateBasis);
        }
        let tau = tau_of(m);
        if tau.re > h || tau.re < -h.clone() {
            let n = (&tau.re + &h).floor().to_integer();
            let n = n.to_i64().ok_or(Error::DegenerateBasis)?;
            m = mat_mul(translate(n), m);
            continue;
        }
        if tau.norm_sqr() < one {
            m = mat_mul(INVERT, m);
            continue;
        }
        break;
    }
    if tau_of(m).re == -h.clone() {
        m = mat_mul(translate(-1), m);
    }
    let tau = tau_of(m);
    if tau.norm_sqr() == one && tau.re.is_negative() {
        m = mat_mul(INVERT, m);
    }
    let reduced = exact_apply(m, w1, w2);
    let omega1 = reduced.0.to_complex();
    let omega2 = reduced.1.to_complex();
    let tau = reduced.1.div(&reduced.0).expect("nonzero period").to_complex();
    Ok(Lattice {
        omega1,
        omega2,
        tau,
        reduction: m,
        input: (w1.to_complex(), w2.to_complex()),
        exact: Some(ExactPeriods { input: (w1.clone(), w2.clone()), reduced }),
    })
}

impl Lattice {
    /// The square lattice `Z + Z i`.
    pub fn square() -> Self {
        reduce_basis_exact(&GaussianRational::from_integers(1, 0), &GaussianRational::from_integers(0, 1))
            .expect("square lattice is valid")
    }

    /// Parses `"<w1>,<w2>"` with complex literals, in exact mode.
    pub fn parse(spec: &str) -> Result<Self> {
        let (a, b) =
            spec.split_once(',').ok_or_else(|| Error::InvalidInput(format!("lattice `{spec}` must be `<w1>,<w2>`")))?;
        let w1: GaussianRational = a.parse()?;
        let w2: GaussianRational = b.parse()?;
        reduce_basis_exact(&w1, &w2)
    }

    pub fn omega1(&self) -> Complex64 {
        self.omega1
    }

    pub fn omega2(&self) -> Complex64 {
        self.omega2
    }

    pub fn tau(&self) -> Complex64 {
        self.tau
    }

    pub fn reduction(&self) -> [[i64; 2]; 2] {
        self.reduction
    }

    pub fn input_basis(&self) -> (Complex64, Complex64) {
        self.input
    }

    pub fn is_exact(&self) -> bool {
        self.exact.is_some()
    }

    /// Exact reduced periods, when the lattice was built from exact input.
    pub fn exact_periods(&self) -> Option<(&GaussianRational, &GaussianRational)> {
        self.exact.as_ref().map(|e| (&e.reduced.0, &e.reduced.1))
    }

    pub fn exact_input(&self) -> Option<(&GaussianRational, &GaussianRational)> {
        self.exact.as_ref().map(|e| (&e.input.0, &e.input.1))
    }

    /// Exact lattice vector `k omega1 + l omega2`.
    pub fn exact_point(&self, k: i64, l: i64) -> Option<GaussianRational> {
        self.exact_periods().map(|(a, b)| &int_mul(k, a) + &int_mul(l, b))
    }

    /// `Im(omega1 * conj(omega2))`, signed; its modulus is the cell area.
    pub fn cross(&self) -> f64 {
        (self.omega1 * self.omega2.conj()).im
    }

    pub fn area(&self) -> f64 {
        self.cross().abs()
    }

    /// Vertices `(+-omega1 +- omega2) / 2` of the fundamental parallelogram.
    pub fn cell_vertices(&self) -> [Complex64; 4] {
        let (a, b) = (self.omega1 * 0.5, self.omega2 * 0.5);
        [a + b, -a + b, -a - b, a - b]
    }

    /// Largest modulus of a point of the fundamental parallelogram.
    pub fn cell_radius(&self) -> f64 {
        self.cell_vertices().iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn period_scale(&self) -> f64 {
        self.omega1.norm() + self.omega2.norm()
    }

    /// Real coordinates `(s, t)` with `z = s omega1 + t omega2`.
    pub fn coordinates(&self, z: Complex64) -> (f64, f64) {
        let cross = self.cross();
        let s = (z * self.omega2.conj()).im / cross;
        let t = (z * self.omega1.conj()).im / -cross;
        (s, t)
    }

    /// Distance from `z` to the nearest lattice point.
    pub fn distance_to_lattice(&self, z: Complex64) -> f64 {
        let cell = reduce_to_cell(self, z);
        let mut best = f64::INFINITY;
        for dm in -1..=1 {
            for dn in -1..=1 {
                let w = self.omega1 * dm as f64 + self.omega2 * dn as f64;
                best = best.min((cell.z0 - w).norm());
            }
        }
        best
    }

    /// Lattice points with modulus at most `radius`.
    pub fn points_within(&self, radius: f64) -> Vec<(i64, i64, Complex64)> {
        let c = cosine_constant(self);
        let bound = (c * radius).ceil() as i64 + 1;
        let mut out = Vec::new();
        for k in -bound..=bound {
            for l in -bound..=bound {
                let w = self.omega1 * k as f64 + self.omega2 * l as f64;
                if w.norm() <= radius {
                    out.push((k, l, w));
                }
            }
        }
        out
    }
}

/// Writes a lattice vector in the reduced basis.
pub fn decompose(lat: &Lattice, w: Complex64) -> Result<(i64, i64)> {
    let (s, t) = lat.coordinates(w);
    let (k, l) = (s.round(), t.round());
    let residual = (w - lat.omega1 * k - lat.omega2 * l).norm();
    if !residual.is_finite() || residual > SNAP_TOL {
        return Err(Error::NotLatticePoint { residual });
    }
    Ok((k as i64, l as i64))
}

/// A constant `c` with `|k|, |l| <= c |w|` for every lattice vector
/// `w = k omega1 + l omega2`.
pub fn cosine_constant(lat: &Lattice) -> f64 {
    lat.omega1.norm().max(lat.omega2.norm()) / lat.area()
}

/// Reduces `z` modulo the lattice into the fundamental parallelogram.
/// On the boundary the smaller `(m, n)` is chosen.
pub fn reduce_to_cell(lat: &Lattice, z: Complex64) -> CellReduction {
    let (s, t) = lat.coordinates(z);
    let m = (s - 0.5).ceil();
    let n = (t - 0.5).ceil();
    let z0 = z - lat.omega1 * m - lat.omega2 * n;
    CellReduction { z0, m: m as i64, n: n as i64 }
}

/// Exact lattice coordinates of a Gaussian rational, if it lies in the lattice.
pub fn exact_coordinates(lat: &Lattice, z: &GaussianRational) -> Option<(BigInt, BigInt)> {
    let (a, b) = lat.exact_periods()?;
    let cross = (a * &b.conj()).im;
    let s = (z * &b.conj()).im / &cross;
    let t = (z * &a.conj()).im / -cross;
    if s.is_integer() && t.is_integer() {
        Some((s.to_integer(), t.to_integer()))
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn g(re: i64, im: i64) -> GaussianRational {
        GaussianRational::from_integers(re, im)
    }

    #[test]
    fn square_basis_is_already_reduced() {
        let lat = reduce_basis(c(1.0, 0.0), c(0.0, 1.0)).unwrap();
        assert_eq!(lat.tau(), c(0.0, 1.0));
        assert_eq!(lat.reduction(), [[1, 0], [0, 1]]);
    }

    #[test]
    fn translation_step() {
        let lat = reduce_basis(c(1.0, 0.0), c(1.0, 1.0)).unwrap();
        assert!((lat.tau() - c(0.0, 1.0)).norm() < 1e-15);
        assert_eq!(lat.reduction(), [[1, 0], [-1, 1]]);
    }

    #[test]
    fn swap_fixes_orientation() {
        let lat = reduce_basis(c(0.0, 2.0), c(2.0, 0.0)).unwrap();
        assert_eq!(lat.omega1(), c(2.0, 0.0));
        assert_eq!(lat.omega2(), c(0.0, 2.0));
        assert_eq!(lat.tau(), c(0.0, 1.0));
        let exact = reduce_basis_exact(&g(0, 2), &g(2, 0)).unwrap();
        assert_eq!(exact.tau(), c(0.0, 1.0));
        assert_eq!(exact.omega1(), c(2.0, 0.0));
    }

    /// Brute force over unimodular words of length <= 3 in {T, T^-1, S}:
    /// the orbit of -i must contain exactly one fundamental-domain point.
    #[test]
    fn swap_example_matches_word_search() {
        let moves: [fn(Complex64) -> Complex64; 3] = [|t| t + 1.0, |t| t - 1.0, |t| -1.0 / t];
        let start = c(2.0, 0.0) / c(0.0, 2.0);
        // orientation flip first (-i lies in the lower half plane)
        let start = 1.0 / start;
        let mut found = vec![];
        let mut frontier = vec![start];
        for _ in 0..3 {
            let mut next = vec![];
            for t in &frontier {
                for mv in &moves {
                    next.push(mv(*t));
                }
            }
            for t in &next {
                if t.re.abs() <= 0.5 && t.norm() >= 1.0 - 1e-12 {
                    found.push(*t);
                }
            }
            frontier = next;
        }
        if start.re.abs() <= 0.5 && start.norm() >= 1.0 {
            found.push(start);
        }
        assert!(found.iter().all(|t| (t - c(0.0, 1.0)).norm() < 1e-12));
    }

    #[test]
    fn degenerate_bases_rejected() {
        assert_eq!(reduce_basis(c(1.0, 0.0), c(2.0, 0.0)), Err(Error::DegenerateBasis));
        assert_eq!(reduce_basis(c(0.0, 0.0), c(0.0, 1.0)), Err(Error::DegenerateBasis));
        assert_eq!(reduce_basis_exact(&g(1, 1), &g(2, 2)), Err(Error::DegenerateBasis));
    }

    #[test]
    fn boundary_tie_breaking() {
        // Re(tau) = -1/2 moves to +1/2.
        let lat = reduce_basis_exact(&g(2, 0), &"-1+3i".parse().unwrap()).unwrap();
        assert_eq!(lat.tau(), c(0.5, 1.5));
        // |tau| = 1 with negative real part is reflected.
        let w2: GaussianRational = "-7/25+24/25i".parse().unwrap();
        let lat = reduce_basis_exact(&g(1, 0), &w2).unwrap();
        assert!((lat.tau() - c(0.28, 0.96)).norm() < 1e-15);
    }

    #[test]
    fn exact_reduction_reproduces_periods() {
        let w1: GaussianRational = "3+1/2i".parse().unwrap();
        let w2: GaussianRational = "7/3+5i".parse().unwrap();
        let lat = reduce_basis_exact(&w1, &w2).unwrap();
        let m = lat.reduction();
        let (a, b) = exact_apply(m, &w1, &w2);
        let (ea, eb) = lat.exact_periods().unwrap();
        assert_eq!(&a, ea);
        assert_eq!(&b, eb);
        assert_eq!((m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs(), 1);
    }

    #[test]
    fn decompose_examples() {
        let sq = Lattice::square();
        assert_eq!(decompose(&sq, c(3.0, 4.0)).unwrap(), (3, 4));
        assert_eq!(decompose(&sq, c(0.0, 0.0)).unwrap(), (0, 0));
        assert!(matches!(decompose(&sq, c(0.5, 0.0)), Err(Error::NotLatticePoint { .. })));
    }

    #[test]
    fn decompose_non_reduced_basis_example() {
        // Basis (2, 1+i): 3+i = 1*2 + 1*(1+i). Solve the 2x2 real system directly.
        let (w1, w2, w) = (c(2.0, 0.0), c(1.0, 1.0), c(3.0, 1.0));
        let det = w1.re * w2.im - w2.re * w1.im;
        let k = (w.re * w2.im - w2.re * w.im) / det;
        let l = (w1.re * w.im - w.re * w1.im) / det;
        assert_eq!((k, l), (1.0, 1.0));
        let lat = reduce_basis(w1, w2).unwrap();
        let (kr, lr) = decompose(&lat, w).unwrap();
        // Map reduced coordinates back to the input basis: (k, l) = (kr, lr) * M.
        let m = lat.reduction();
        let back = (kr * m[0][0] + lr * m[1][0], kr * m[0][1] + lr * m[1][1]);
        assert_eq!(back, (1, 1));
    }

    #[test]
    fn cosine_constant_examples() {
        assert!((cosine_constant(&Lattice::square()) - 1.0).abs() < 1e-15);
        let lat = reduce_basis(c(1.0, 0.0), c(0.0, 2.0)).unwrap();
        assert!((cosine_constant(&lat) - 1.0).abs() < 1e-15);
        let lat = reduce_basis(c(1.0, 0.0), c(0.5, 3f64.sqrt() / 2.0)).unwrap();
        assert!((cosine_constant(&lat) - 2.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn cell_examples() {
        let sq = Lattice::square();
        let r = reduce_to_cell(&sq, c(0.2, 0.3));
        assert_eq!((r.m, r.n), (0, 0));
        assert!((r.z0 - c(0.2, 0.3)).norm() < 1e-15);
        let r = reduce_to_cell(&sq, c(1.2, 0.3));
        assert_eq!((r.m, r.n), (1, 0));
        assert!((r.z0 - c(0.2, 0.3)).norm() < 1e-15);
    }

    #[test]
    fn cell_example_matches_brute_force() {
        let sq = Lattice::square();
        let z = c(-2.6, -2.6);
        // Nearest-cell search over |m|, |n| <= 4.
        let mut best = None;
        for m in -4i64..=4 {
            for n in -4i64..=4 {
                let z0 = z - c(m as f64, n as f64);
                if z0.re.abs() <= 0.5 && z0.im.abs() <= 0.5 {
                    best = Some((m, n, z0));
                }
            }
        }
        let (bm, bn, bz) = best.unwrap();
        assert_eq!((bm, bn), (-3, -3));
        let r = reduce_to_cell(&sq, z);
        assert_eq!((r.m, r.n), (bm, bn));
        assert!((r.z0 - bz).norm() < 1e-14);
        assert!((r.z0 - c(0.4, 0.4)).norm() < 1e-14);
    }

    #[test]
    fn cell_boundary_prefers_smaller_indices() {
        let r = reduce_to_cell(&Lattice::square(), c(0.5, -0.5));
        assert_eq!((r.m, r.n), (0, -1));
        assert_eq!(r.z0, c(0.5, 0.5));
    }

    #[test]
    fn exact_membership() {
        let sq = Lattice::square();
        assert!(exact_coordinates(&sq, &g(3, -2)).is_some());
        assert!(exact_coordinates(&sq, &"1/2".parse().unwrap()).is_none());
    }

    fn sample_lattices() -> Vec<Lattice> {
        vec![
            Lattice::square(),
            reduce_basis(c(1.0, 0.0), c(0.3, 1.2)).unwrap(),
            reduce_basis(c(1.3, 0.4), c(-0.7, 2.9)).unwrap(),
        ]
    }

    proptest! {
        #[test]
        fn cell_round_trip(re in -50.0f64..50.0, im in -50.0f64..50.0, which in 0usize..3) {
            let z = c(re, im);
            prop_assume!(z.norm() <= 50.0);
            let lat = &sample_lattices()[which];
            let r = reduce_to_cell(lat, z);
            prop_assert!((r.reconstruct(lat) - z).norm() <= 1e-12 * z.norm().max(1.0));
            let (s, t) = lat.coordinates(r.z0);
            let slack = 1e-10 * lat.period_scale();
            prop_assert!(s.abs() <= 0.5 + slack && t.abs() <= 0.5 + slack);
        }

        #[test]
        fn decompose_inverts_combination(k in -100i64..=100, l in -100i64..=100, which in 0usize..3) {
            let lat = &sample_lattices()[which];
            let w = lat.omega1() * k as f64 + lat.omega2() * l as f64;
            prop_assert_eq!(decompose(lat, w).unwrap(), (k, l));
            if k != 0 || l != 0 {
                let cc = cosine_constant(lat);
                prop_assert!(k.abs() as f64 <= cc * w.norm() * (1.0 + 1e-12));
                prop_assert!(l.abs() as f64 <= cc * w.norm() * (1.0 + 1e-12));
            }
        }

        #[test]
        fn reduced_tau_invariant_under_unimodular_change(
            word in proptest::collection::vec(0usize..4, 0..8),
            re1 in 1i64..5, im2 in 1i64..5, re2 in -3i64..3,
        ) {
            let gens = [SWAP, INVERT, translate(1), translate(-1)];
            let [[a, b], [cc, d]] = word.iter().fold([[1, 0], [0, 1]], |m, &i| mat_mul(gens[i], m));
            let w1 = g(re1, 0);
            let w2 = g(re2, im2);
            let base = reduce_basis_exact(&w1, &w2).unwrap();
            let v1 = &int_mul(a, &w1) + &int_mul(b, &w2);
            let v2 = &int_mul(cc, &w1) + &int_mul(d, &w2);
            let changed = reduce_basis_exact(&v1, &v2).unwrap();
            prop_assert_eq!(base.tau(), changed.tau());
            let float = reduce_basis(v1.to_complex(), v2.to_complex()).unwrap();
            prop_assert!((float.tau() - base.tau()).norm() < 1e-9);
        }
    }
}
