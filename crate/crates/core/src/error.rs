use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("characteristic 3 is not supported")]
    PEqualsThree,
    #[error("modulus is not irreducible over F_{0}")]
    ReducibleModulus(u32),
    #[error("invalid modulus: {0}")]
    BadModulus(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("element is not a cube")]
    NotACube,
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("field size is not 1 mod 3")]
    WrongResidueClass,
    #[error("element is not a unit")]
    NotAUnit,
    #[error("zero polynomial has no reciprocal")]
    ZeroPolynomial,
    #[error("degree {deg} exceeds bound {bound}")]
    DegreeTooLarge { deg: usize, bound: usize },
    #[error("digit shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("factor product does not equal x^n - alpha")]
    ProductMismatch,
    #[error("operands belong to different contexts")]
    ContextMismatch,
    #[error("range violation: {0}")]
    RangeViolation(String),
    #[error("z-series has nonempty tail but zero leading digit")]
    ZNotInvertible,
    #[error("mu = {mu} is not below the torsion exponent {im}")]
    MuNotBelowIm { mu: usize, im: usize },
    #[error("operation not supported for case {0}")]
    UnsupportedCase(String),
    #[error("alpha is not a cube")]
    NotCube,
    #[error("word length {got} differs from code length {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("subspaces live in different ambient spaces")]
    AmbientMismatch,
    #[error("dual formula disagrees with oracle in branch {branch} (formula dim {formula_dim}, oracle dim {oracle_dim})")]
    FormulaDiscrepancy {
        branch: String,
        formula_dim: usize,
        oracle_dim: usize,
    },
    #[error("internal invariant failed: {0}")]
    Invariant(String),
    #[error("invalid input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable identifier used in JSON diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotPrime(_) => "NotPrime",
            Error::PEqualsThree => "PEqualsThree",
            Error::ReducibleModulus(_) => "ReducibleModulus",
            Error::BadModulus(_) => "BadModulus",
            Error::DivisionByZero => "DivisionByZero",
            Error::NotACube => "NotACube",
            Error::ZeroInput => "ZeroInput",
            Error::WrongResidueClass => "WrongResidueClass",
            Error::NotAUnit => "NotAUnit",
            Error::ZeroPolynomial => "ZeroPolynomial",
            Error::DegreeTooLarge { .. } => "DegreeTooLarge",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::ProductMismatch => "ProductMismatch",
            Error::ContextMismatch => "ContextMismatch",
            Error::RangeViolation(_) => "RangeViolation",
            Error::ZNotInvertible => "ZNotInvertible",
            Error::MuNotBelowIm { .. } => "MuNotBelowIm",
            Error::UnsupportedCase(_) => "UnsupportedCase",
            Error::NotCube => "NotCube",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::AmbientMismatch => "AmbientMismatch",
            Error::FormulaDiscrepancy { .. } => "FormulaDiscrepancy",
            Error::Invariant(_) => "Invariant",
            Error::Parse(_) => "Parse",
        }
    }

    /// True for errors caused by internal invariant failures rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            Error::Invariant(_) | Error::ProductMismatch | Error::FormulaDiscrepancy { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
