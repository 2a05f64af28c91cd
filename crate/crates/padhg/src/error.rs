//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the library.
///
/// Every variant carries a human readable detail string; [`Error::code`]
/// gives a stable machine-readable identifier used by the command line
/// front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("denominator divisible by p or zero: {0}")]
    DenominatorDivisibleByP(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("mismatched primes {0} and {1}")]
    PrimeMismatch(u64, u64),
    #[error("not a p-adic unit: {0}")]
    NotAUnit(String),
    #[error("ramified extension: p={p} divides m={m}")]
    RamifiedExtension { p: u64, m: u64 },
    #[error("element is not invertible: {0}")]
    NonInvertible(String),
    #[error("constant term is not a unit")]
    NonUnitConstantTerm,
    #[error("invalid Frobenius lift: {0}")]
    InvalidLift(String),
    #[error("singular recursion at order {0}")]
    SingularRecursion(usize),
    #[error("argument is not p-integral: {0}")]
    NonIntegralArgument(String),
    #[error("loop budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("bracket variant has a pole at 1: {0}")]
    BracketPoleAtOne(String),
    #[error("modulus divisible by p: {0}")]
    ModulusDivisibleByP(String),
    #[error("character is not primitive or has trivial conductor: {0}")]
    NonPrimitive(String),
    #[error("bad modulus: {0}")]
    BadModulus(String),
    #[error("r = 1 is handled by the logarithm identity")]
    RIsOne,
    #[error("parameter is not p-integral: {0}")]
    NotPIntegral(String),
    #[error("hypothesis violation: {0}")]
    HypothesisViolation(String),
    #[error("pole in parameters: {0}")]
    PoleInParameters(String),
    #[error("repeated node: {0}")]
    RepeatedNode(String),
    #[error("singular basis matrix")]
    SingularBasis,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("bad specialization point: {0}")]
    BadSpecializationPoint(String),
    #[error("bad weights: {0}")]
    BadWeights(String),
    #[error("p divides a parameter: {0}")]
    PDividesParameter(String),
    #[error("singular fiber: {0}")]
    SingularFiber(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable identifier of the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DenominatorDivisibleByP(_) => "DenominatorDivisibleByP",
            Error::DivisionByZero => "DivisionByZero",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::PrimeMismatch(..) => "PrimeMismatch",
            Error::NotAUnit(_) => "NotAUnit",
            Error::RamifiedExtension { .. } => "RamifiedExtension",
            Error::NonInvertible(_) => "NonInvertible",
            Error::NonUnitConstantTerm => "NonUnitConstantTerm",
            Error::InvalidLift(_) => "InvalidLift",
            Error::SingularRecursion(_) => "SingularRecursion",
            Error::NonIntegralArgument(_) => "NonIntegralArgument",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::BracketPoleAtOne(_) => "BracketPoleAtOne",
            Error::ModulusDivisibleByP(_) => "ModulusDivisibleByP",
            Error::NonPrimitive(_) => "NonPrimitive",
            Error::BadModulus(_) => "BadModulus",
            Error::RIsOne => "RIsOne",
            Error::NotPIntegral(_) => "NotPIntegral",
            Error::HypothesisViolation(_) => "HypothesisViolation",
            Error::PoleInParameters(_) => "PoleInParameters",
            Error::RepeatedNode(_) => "RepeatedNode",
            Error::SingularBasis => "SingularBasis",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::BadSpecializationPoint(_) => "BadSpecializationPoint",
            Error::BadWeights(_) => "BadWeights",
            Error::PDividesParameter(_) => "PDividesParameter",
            Error::SingularFiber(_) => "SingularFiber",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
