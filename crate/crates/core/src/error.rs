use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("tree order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("tree order must be at least 1 and at most 254, got {0}")]
    InvalidOrder(usize),
    #[error("generator index {index} outside 1..={max}")]
    GeneratorOutOfRange { index: usize, max: usize },
    #[error("word is not reduced: letter {0} repeated")]
    NotReduced(usize),
    #[error("the root has no parent")]
    RootHasNoParent,
    #[error("the root has no field index; use the root rule")]
    RootHasNoFieldIndex,
    #[error("invalid subgroup set: {0}")]
    InvalidSubgroup(String),
    #[error("enumeration of {requested} items exceeds the cap of {cap}")]
    EnumerationCap { requested: u128, cap: u128 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("|theta| must be < 1, got {0}")]
    ThetaOutOfRange(f64),
    #[error("expected a strictly positive value for {what}, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("|A| must lie in 1..={k}, got {card_a}")]
    InvalidCardA { card_a: usize, k: usize },
    #[error("division by u^2 - 1 left a nonzero remainder")]
    NonZeroRemainder,
    #[error("polynomial is not palindromic")]
    NotPalindromic,
    #[error("polynomial has odd degree {0}; the xi substitution needs even degree")]
    OddDegree(usize),
    #[error("negative square-root argument {0} at xi = {1}")]
    NegativeDiscriminant(f64, f64),
    #[error("no closed-form branch functions for k = {0} (only k = 5, 6)")]
    NoBranchFormula(usize),
    #[error("the zero polynomial has no sign sequence")]
    ZeroPolynomial,
    #[error("polynomial degree {degree} exceeds the cap {cap}")]
    DegreeCap { degree: usize, cap: usize },
    #[error("empty or reversed interval")]
    BadInterval,
    #[error("configuration covers {got} vertices, ball has {expected}")]
    IncompleteConfiguration { got: usize, expected: usize },
    #[error("boundary field missing for a vertex of the outer shell")]
    MissingField,
    #[error("vertex is outside the ball")]
    VertexOutsideBall,
}

pub type Result<T> = std::result::Result<T, Error>;
