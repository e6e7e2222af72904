use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid root data: {0}")]
    InvalidRoot(String),
    #[error("color {0} is not admissible (integral but not in rZ)")]
    NotAdmissibleColor(String),
    #[error("reduced Kirby color needs r even")]
    ReducedUnavailable,
    #[error("invalid label: {0}")]
    InvalidLabel(String),
    #[error("realization failed: {0}")]
    RealizationFailed(String),
    #[error("endomorphism of a simple module is not scalar (deviation {0:e})")]
    NotProportional(f64),
    #[error("endomorphism is outside span(Id, x) (residual {0:e})")]
    DecompositionFailed(f64),
    #[error("malformed diagram: {0}")]
    MalformedDiagram(String),
    #[error("unknown coupon {0}")]
    UnknownCoupon(String),
    #[error("no projective-colored edge to cut")]
    NoProjectiveEdge,
    #[error("odd signed crossing count between components {0} and {1}")]
    NonIntegralLinking(usize, usize),
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("presentation not computable: {0}")]
    NotComputable(String),
    #[error("presentation not admissible: {0}")]
    NotAdmissible(String),
    #[error("Kashaev specialization needs r odd")]
    EvenR,
    #[error("beta = {0} is on the pole set")]
    PoleAtBeta(String),
    #[error("invalid lens space data: {0}")]
    InvalidLens(String),
    #[error("operation needs r = {expected}, got r = {got}")]
    WrongR { expected: usize, got: usize },
    #[error("no Conway fixture for {0}")]
    MissingFixture(String),
    #[error("unsupported tensor word for hom_dimension: {0}")]
    UnsupportedWord(String),
    #[error("diagram has {width} simultaneous strands, limit is {limit}")]
    TooWide { width: usize, limit: usize },
    #[error("numeric check failed: {0}")]
    Numeric(String),
}

/// Coarse classification used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Numeric,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::RealizationFailed(_)
            | Error::NotProportional(_)
            | Error::DecompositionFailed(_)
            | Error::Numeric(_) => ErrorClass::Numeric,
            _ => ErrorClass::Validation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
