use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("vertex {vertex} maps to {image}, outside 0..{n}")]
    ImageOutOfRange { vertex: usize, image: usize, n: usize },

    #[error("invalid component id {0}")]
    InvalidComponent(usize),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("map is not injective: {0}")]
    NotInjective(String),

    #[error("brute-force guard exceeded: n = {n} > {guard}")]
    GuardExceeded { n: usize, guard: usize },

    #[error("square-root criterion fails: {0}")]
    CriterionFailed(String),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point lies outside the carrier")]
    OutsideCarrier,

    #[error("degenerate simplex")]
    DegenerateSimplex,

    #[error("empty complex")]
    EmptyComplex,

    #[error("simplex is not part of the complex")]
    SimplexNotInComplex,

    #[error("invalid vertex insertion: {0}")]
    InvalidInsertion(String),

    #[error("perturbation retry budget exhausted at target {index}")]
    RetryBudgetExhausted { index: usize },

    #[error("vertex table has {got} entries, complex has {expected} vertices")]
    TableLength { expected: usize, got: usize },

    #[error("maps are supported on different complexes")]
    ComplexMismatch,

    #[error("image of vertex {0} leaves the carrier")]
    NotSelfMap(usize),

    #[error("piece is not injective")]
    NonInjectivePiece,

    #[error("pipeline step failed: {step}: {reason}")]
    Pipeline { step: String, reason: String },

    #[error("certification failed: achieved bound {achieved} is not below {target}")]
    CertificationFailed { achieved: String, target: String },

    #[error("target box meets the carrier of the subcomplex")]
    BoxOverlapsComplex,

    #[error("refinement needs {needed} simplices, budget is {budget}")]
    SimplexBudget { needed: usize, budget: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn pipeline(step: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Pipeline {
            step: step.into(),
            reason: reason.into(),
        }
    }
}
