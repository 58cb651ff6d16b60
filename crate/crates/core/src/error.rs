use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("operand does not belong to ring {0}")]
    MixedRing(String),
    #[error("element is not a unit")]
    NotAUnit,
    #[error("invalid ring descriptor: {0}")]
    InvalidRing(String),
    #[error("operation requires {required}, got {ring}")]
    Capability { required: &'static str, ring: String },
    #[error("valuation {found} is below the requested filtration level {s}")]
    BelowFiltration { found: u32, s: u32 },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("primary refinement unsupported over {0}: factorization not available")]
    RefinementUnsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
