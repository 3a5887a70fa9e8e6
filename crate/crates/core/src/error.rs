//! Error type shared by every module.

use serde::Serialize;

/// A single violated group invariant, reported by [`crate::schottky::validate_group`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    /// Short machine-readable code, e.g. `"not_unimodular"`.
    pub code: String,
    /// Human-readable detail.
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code, self.detail)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid group: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    InvalidGroup(Vec<Violation>),
    #[error("word is not reduced at position {0}")]
    NotReduced(usize),
    #[error("evaluation at a pole of the Moebius map")]
    Pole,
    #[error("derivative {0} lies on the negative real branch cut")]
    BranchCut(f64),
    #[error("tau = {tau} too large: partition contains a word of length {len} < 2")]
    TauTooLarge { tau: f64, len: usize },
    #[error("word count exceeds the cap of {0}")]
    WordCap(usize),
    #[error("truncation did not converge: relative change {change:e} at N = {n}")]
    TruncationNotConverged { n: usize, change: f64 },
    #[error("matrix dimension {dim} exceeds the cap {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("quadrature did not converge: relative change {0:e} between Q and 2Q")]
    QuadratureNotConverged(f64),
    #[error("bisection bracket failure: {0}")]
    Bracket(String),
    #[error("determinant not real on the real axis: |Im|/|det| = {ratio:e} at s = {s}")]
    NotReal { s: f64, ratio: f64 },
    #[error("zero detected on the contour near s = {re} + {im}i")]
    BoundaryZero { re: f64, im: f64 },
    #[error("contour refinement did not converge after {0} samples")]
    ContourNotConverged(usize),
    #[error("Euler product not converging at len_max = {len_max}: shell sum {last:e} vs {prev:e}")]
    EulerDivergent { len_max: usize, last: f64, prev: f64 },
    #[error("reduction mod {0} is not surjective onto SL2")]
    NotSurjective(u64),
    #[error("enumeration size {size} exceeds the cap {cap}")]
    EnumerationCap { size: u64, cap: u64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid representation: {0}")]
    InvalidRep(String),
    #[error("sieve bound {hi} exceeds the cap {cap}")]
    SieveCap { hi: f64, cap: u64 },
    #[error("zeta vanishes numerically at the Jensen center {0}")]
    JensenCenterZero(f64),
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Stable machine-readable error code used in CLI error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidGroup(_) => "invalid_group",
            Error::NotReduced(_) => "not_reduced",
            Error::Pole => "pole",
            Error::BranchCut(_) => "branch_cut",
            Error::TauTooLarge { .. } => "tau_too_large",
            Error::WordCap(_) => "word_cap",
            Error::TruncationNotConverged { .. } => "truncation_not_converged",
            Error::DimensionCap { .. } => "dimension_cap",
            Error::QuadratureNotConverged(_) => "quadrature_not_converged",
            Error::Bracket(_) => "bracket",
            Error::NotReal { .. } => "not_real",
            Error::BoundaryZero { .. } => "boundary_zero",
            Error::ContourNotConverged(_) => "contour_not_converged",
            Error::EulerDivergent { .. } => "euler_divergent",
            Error::NotSurjective(_) => "not_surjective",
            Error::EnumerationCap { .. } => "enumeration_cap",
            Error::Precondition(_) => "precondition",
            Error::InvalidRep(_) => "invalid_rep",
            Error::SieveCap { .. } => "sieve_cap",
            Error::JensenCenterZero(_) => "jensen_center_zero",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }

    /// Violations carried by [`Error::InvalidGroup`], empty otherwise.
    pub fn violations(&self) -> &[Violation] {
        match self {
            Error::InvalidGroup(v) => v,
            _ => &[],
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
