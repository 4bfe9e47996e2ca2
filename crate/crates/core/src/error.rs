use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("element is not a unit")]
    NonUnit,
    #[error("context mismatch")]
    CtxMismatch,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("composition with a series that has nonzero constant term")]
    NonzeroConstant,
    #[error("linear coefficient is not a unit")]
    NonUnitLinearTerm,
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("series is not symmetric: {0}")]
    NotSymmetric(String),
    #[error("integrality failure: {0}")]
    IntegralityFailure(String),
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("not a Weierstrass series: {0}")]
    NotWeierstrass(String),
    #[error("malformed formal group law: {0}")]
    MalformedFgl(String),
    #[error("exact division failed: {0}")]
    ExactDivisionFailure(String),
    #[error("basis failure: {0}")]
    BasisFailure(String),
    #[error("invariant violation: {0}")]
    InvariantViolation(String),
    #[error("element is not Gamma-invariant: {0}")]
    NotInGammaInvariants(String),
    #[error("unknown generator: {0}")]
    UnknownGenerator(String),
    #[error("digit expansion does not vanish: {0}")]
    DigitNonvanishing(String),
    #[error("relation fails: {0}")]
    RelationFailure(String),
    #[error("reduction failure: {0}")]
    ReductionFailure(String),
    #[error("multiplication by alpha(t) is singular")]
    SingularMt,
    #[error("witness not found: {0}")]
    WitnessNotFound(String),
    #[error("algebra is not local: {0}")]
    NotLocal(String),
    #[error("group order divisible by p: {0}")]
    BadGroupOrder(String),
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("search space too large: {0}")]
    TooLarge(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("mismatch: {0}")]
    Mismatch(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureKind {
    Usage,
    Invariant,
    Precision,
}

impl Error {
    pub fn kind(&self) -> FailureKind {
        match self {
            Error::PrecisionExhausted(_) | Error::ReductionFailure(_) => FailureKind::Precision,
            Error::InvalidInput(_)
            | Error::BadParams(_)
            | Error::TooLarge(_)
            | Error::Unsupported(_)
            | Error::IndexOutOfRange(_)
            | Error::UnknownGenerator(_)
            | Error::CtxMismatch => FailureKind::Usage,
            _ => FailureKind::Invariant,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
