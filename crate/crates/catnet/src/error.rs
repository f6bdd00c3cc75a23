use alloc::string::String;

/// Faults raised while loading data or assembling operators.
///
/// Verification failures are never errors; they are report items.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("unit axiom violated: {0}")]
    UnitAxiom(String),
    #[error("inadmissible entry: {0}")]
    Inadmissible(String),
    #[error("dual is not an involution")]
    NonInvolutiveDual,
    #[error("fusion multiplicity {mult} for ({a},{b};{c}) exceeds one")]
    Multiplicity { a: String, b: String, c: String, mult: u32 },
    #[error("non-associative fusion ring")]
    NonAssociative,
    #[error("unknown builtin '{0}'")]
    UnknownBuiltin(String),
    #[error("unknown label '{0}'")]
    UnknownLabel(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("inadmissible move: {0}")]
    InadmissibleMove(String),
    #[error("geometry: {0}")]
    Geometry(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("module trace is not normalized")]
    UnnormalizedTrace,
    #[error("module object misses an indecomposable summand")]
    NonFaithfulTrace,
    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = core::result::Result<T, Error>;
