//! Weierstrass sigma on arbitrary lattices, growth certificates, heights of
//! algebraic numbers, auxiliary polynomials, zero counting and reproducible
//! censuses of algebraic points on the graph of sigma.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod algebraic;
pub mod auxpoly;
pub mod bounds;
pub mod census;
pub mod elliptic;
pub mod error;
pub mod exact;
pub mod growth;
pub mod lattice;
pub mod linalg;
pub mod zerocount;

pub use algebraic::AlgebraicNumber;
pub use auxpoly::AuxPolynomial;
pub use bounds::{BoundId, BoundValue};
pub use census::{CensusMode, CensusSummary, RunManifest};
pub use elliptic::{LogSigma, QuasiPeriodData, SigmaEvaluator};
pub use error::{Error, Result};
pub use exact::GaussianRational;
pub use growth::GrowthCertificate;
pub use lattice::{CellReduction, Lattice};
pub use zerocount::{BivariatePoly, ZeroCountReport};
