use thiserror::Error;

/// Errors produced by the constructions in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate body: {0}")]
    DegenerateBody(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("erosion by {delta} empties the body (inradius {inradius})")]
    EmptyErosion { delta: f64, inradius: f64 },
    #[error("degenerate facet: {0}")]
    DegenerateFacet(String),
    #[error("no interior point with clearance {required} (inradius {inradius})")]
    InradiusTooSmall { required: f64, inradius: f64 },
    #[error("level k={k} too coarse for d={d}: need 2^(2-k)*sqrt(d) < 1")]
    LevelTooCoarse { d: usize, k: u32 },
    #[error("increment triangulation inconsistent at level {level}: relative volume mismatch {mismatch:e}")]
    IncrementError { level: usize, mismatch: f64 },
    #[error("invalid exponents p={p}, r={r}: need 1 <= p < r")]
    InvalidExponents { p: f64, r: f64 },
    #[error("function not in class: L^{r} norm {norm} > 1")]
    NotInClass { norm: f64, r: f64 },
    #[error("construction invalid: {0}")]
    ConstructionInvalid(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("allocation violates the union constraint: {lhs} > {rhs}")]
    AllocationError { lhs: f64, rhs: f64 },
    #[error("insufficient data: {0}")]
    InsufficientData(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
