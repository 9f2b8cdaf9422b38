//! Crate-wide error type.
//!
//! All indices carried in error payloads are zero-based, matching the public
//! API. Human-oriented context goes in the Display text; payload fields stay
//! structured so callers can match on them.

/// Everything that can go wrong across field construction, cone validation,
/// series evaluation, quadrature, and catalog assembly.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("minimal polynomial must be monic")]
    NotMonic,
    #[error("minimal polynomial must be square-free")]
    NotSquareFree,
    #[error("integral basis matrix is singular over the rationals")]
    BasisSingular,
    #[error("first integral basis element must be 1")]
    FirstBasisElementNotOne,
    #[error("basis is not multiplicatively closed: product against basis element {row} has non-integer coordinates")]
    NonIntegralProduct { row: usize },
    #[error("operands use different fields (degree {left} vs {right})")]
    FieldMismatch { left: usize, right: usize },
    #[error("embedding index {index} out of range for degree {degree}")]
    IndexOutOfRange { index: usize, degree: usize },
    #[error("expected a tuple of {expected} elements, got {got}")]
    WrongTupleLength { expected: usize, got: usize },
    #[error("monomial evaluation point must be strictly positive at coordinate {index}")]
    NonPositivePoint { index: usize },
    #[error("cone generators are linearly dependent over the rationals")]
    NotLinearlyIndependent,
    #[error("generator {generator} maps to a negative real part under embedding {embedding}")]
    NegativeEmbedding { generator: usize, embedding: usize },
    #[error("outside the convergence domain: {detail}")]
    DomainError { detail: String },
    #[error("last exponent must be at least 2, got {got}")]
    LastExponentTooSmall { got: u64 },
    #[error("composition must contain at least one exponent")]
    EmptyComposition,
    #[error("series work estimate {estimate} exceeds the term budget {budget}")]
    Overflow { estimate: u128, budget: u128 },
    #[error("nested quadrature dimension {dims} exceeds the supported maximum {max}")]
    DimensionBudgetExceeded { dims: usize, max: usize },
    #[error("membrane integration requires a totally real field")]
    NonTotallyReal,
    #[error("finite-difference step {step} is too large for the evaluation point")]
    StepTooLarge { step: f64 },
    #[error("generators {i} and {k} have equal modulus under embedding {embedding}; the projective limit is undefined")]
    EqualModulusEmbeddings { i: usize, k: usize, embedding: usize },
    #[error("catalog component counts disagree with the closed-form formulas for {kind}")]
    CountMismatch { kind: String },
    #[error("blow-up point for generators {i}, {k} is degenerate under embedding {embedding}")]
    DegenerateBlowupPoint { i: usize, k: usize, embedding: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
