use thiserror::Error;

use crate::algebra::Field;
use crate::fmod::BettiTable;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(Field, Field),
    #[error("variable count mismatch: {0} vs {1}")]
    VariableCountMismatch(usize, usize),
    #[error("monomial length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("{0} is not a prime modulus below 2^32")]
    NonPrimeModulus(u64),
    #[error("ideal generator {index} is not homogeneous: {poly}")]
    InhomogeneousIdeal { index: usize, poly: String },
    #[error("matrix entry ({row}, {col}) is not homogeneous of the expected degree")]
    InhomogeneousEntry { row: usize, col: usize },
    #[error("rank mismatch: expected {expected}, found {found}")]
    RankMismatch { expected: usize, found: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("map is not well defined: relation {relation} is not sent into the target relations")]
    IllDefinedMap { relation: usize },
    #[error("degree {degree} lies outside the available window [{lo}, {hi}]")]
    WindowTooSmall { degree: i32, lo: i32, hi: i32 },
    #[error("map is not represented by monomorphisms: H^-1 of its cone is nonzero")]
    NotRbm { betti: BettiTable },
    #[error("the composite of the two maps is not zero")]
    NotAComplex,
    #[error("Groebner basis computation exceeded the degree limit {limit}")]
    ResourceLimit { limit: i32 },
    #[error("polynomial syntax error at offset {offset}: {message}")]
    PolySyntax { offset: usize, message: String },
    #[error("unknown variable '{name}' at offset {offset}")]
    UnknownVariable { offset: usize, name: String },
    #[error("{0}")]
    Invalid(String),
}

impl Error {
    /// Stable machine-readable code used in CLI output.
    pub fn code(&self) -> &'static str {
        match self {
            Error::FieldMismatch(..) => "FieldMismatch",
            Error::VariableCountMismatch(..) => "VariableCountMismatch",
            Error::LengthMismatch(..) => "LengthMismatch",
            Error::NonPrimeModulus(_) => "NonPrimeModulus",
            Error::InhomogeneousIdeal { .. } => "InhomogeneousIdeal",
            Error::InhomogeneousEntry { .. } => "InhomogeneousEntry",
            Error::RankMismatch { .. } => "RankMismatch",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::IllDefinedMap { .. } => "IllDefinedMap",
            Error::WindowTooSmall { .. } => "WindowTooSmall",
            Error::NotRbm { .. } => "NotRbm",
            Error::NotAComplex => "NotAComplex",
            Error::ResourceLimit { .. } => "ResourceLimit",
            Error::PolySyntax { .. } => "SyntaxError",
            Error::UnknownVariable { .. } => "UnknownIdentifier",
            Error::Invalid(_) => "Invalid",
        }
    }
}
