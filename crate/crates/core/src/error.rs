use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown generator symbol {0:?}")]
    UnknownSymbol(String),

    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("rule {lhs} -> {rhs} is not shortlex-decreasing (non-terminating)")]
    NonTerminating { lhs: String, rhs: String },

    #[error("unresolved critical pair on overlap {overlap}: {left} != {right}")]
    UnresolvedCriticalPair {
        overlap: String,
        left: String,
        right: String,
    },

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("empty input set")]
    EmptySet,

    #[error("invalid tile: {0}")]
    InvalidTile(String),

    #[error("invalid partial tiling: {0}")]
    InvalidTiling(String),

    #[error("invalid homomorphism: {0}")]
    InvalidHom(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("trivial kernel")]
    TrivialKernel,

    #[error("search cap exhausted: {0}")]
    CapExhausted(String),

    #[error("premise violation: {0}")]
    Premise(String),

    #[error("construction failed: {0}")]
    Construction(String),

    /// A pipeline step failed; `report` holds everything computed so far.
    #[error("{step}: {source}")]
    Step {
        step: String,
        source: Box<Error>,
        report: Box<serde_json::Value>,
    },

    #[error("malformed document: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
