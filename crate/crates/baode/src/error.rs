use thiserror::Error;

/// Errors shared across the algebra, frame and dilation layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("atom count {0} out of range (expected 1..={1})")]
    Size(usize, usize),
    #[error("enumeration budget exceeded: {what} needs {needed}, cap is {cap}")]
    Budget {
        what: &'static str,
        needed: u64,
        cap: u64,
    },
    #[error("filter is not proper")]
    ImproperFilter,
    #[error("filter is not an ultrafilter")]
    NotUltra,
    #[error("unbound variable `{0}` in term")]
    UnboundVariable(String),
    #[error("operator index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("transformation {0:?} is not in the signature's monoid")]
    UnknownTransformation(Vec<usize>),
    #[error("signature error: {0}")]
    Signature(String),
    #[error("morphism error: {0}")]
    Morphism(String),
    #[error("frame error: {0}")]
    Frame(String),
    #[error("substructure universe is not contained in the product universe: {0}")]
    Containment(String),
    #[error("map is not a bijection: {0}")]
    Map(String),
    #[error("carrier of neat reduct not closed under {0}")]
    Closure(String),
    #[error("dimension budget exhausted: {0}")]
    DimensionBudget(String),
    #[error("witness index {0} violates the freshness side condition: {1}")]
    WitnessIndex(usize, String),
    #[error("amalgamation precondition failed: {0}")]
    Precondition(String),
    #[error("parse error at {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("input error: {0}")]
    Input(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
