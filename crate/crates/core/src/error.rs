use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate basis: periods are zero or R-linearly dependent")]
    DegenerateBasis,
    #[error("not a lattice point (residual {residual:.3e})")]
    NotLatticePoint { residual: f64 },
    #[error("argument lies on the lattice (distance {distance:.3e})")]
    LatticePoint { distance: f64 },
    #[error("precision unreachable: {0}")]
    PrecisionUnreachable(String),
    #[error("discriminant formulas disagree: {first} vs {second}")]
    FormulaMismatch { first: f64, second: f64 },
    #[error("Im(tau) = {im_tau} exceeds the certified range (<= 1.9)")]
    ImTauTooLarge { im_tau: f64 },
    #[error("discriminant is not negative: {0}")]
    PositiveDiscriminant(f64),
    #[error("root finding failed for {0}")]
    RootFindingFailure(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("input precision too low: error bound {error:.3e} exceeds tol/10 = {limit:.3e}")]
    PrecisionTooLow { error: f64, limit: f64 },
    #[error("linear system has full column rank; no vanishing polynomial of this degree")]
    NoKernel,
    #[error("degree too small: T = {t} but at least {min} is required")]
    DegreeTooSmall { t: usize, min: usize },
    #[error("contour could not be placed away from zeroes near radius {radius}")]
    ContourStuck { radius: f64 },
    #[error("no witness found in the annulus {inner} <= |w| <= {outer}")]
    WitnessNotFound { inner: f64, outer: f64 },
    #[error("domain violation: {0}")]
    DomainViolation(String),
    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("at z = {point}: {source}")]
    AtPoint { point: String, source: Box<Error> },
}

impl Error {
    /// The innermost error, looking through [`Error::AtPoint`].
    pub fn root(&self) -> &Error {
        match self {
            Error::AtPoint { source, .. } => source.root(),
            e => e,
        }
    }
}
