use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("polynomial is not symmetric under reversal: {0}")]
    NotSymmetric(String),
    #[error("polynomial is not skew under reversal: {0}")]
    NotSkew(String),
    #[error("polynomial is not multihomogeneous")]
    NotHomogeneous,
    #[error("malformed word: {0}")]
    MalformedWord(String),
    #[error("no lifting rule applies to `{0}` (more than three distinct letters interleave)")]
    NoLiftRule(String),
    #[error("lift recursion exceeded depth cap {cap} at `{word}`")]
    RecursionCapExceeded { word: String, cap: usize },
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("cache file {path} is corrupt: {reason}")]
    CacheCorrupt { path: String, reason: String },
    #[error("modular eliminations disagree at {degree}: {detail}")]
    PrimeDisagreement { degree: String, detail: String },
    #[error("rational reconstruction failed at {0}")]
    Reconstruction(String),
    #[error("missing assignment for generator {0}")]
    MissingAssignment(String),
    #[error("{0}")]
    Parse(#[from] crate::parse::ParseError),
    #[error("relation row {row} at {degree} is not annihilated by gamma")]
    UnsoundRelation { degree: String, row: usize },
    #[error("property violated: {0}")]
    PropertyViolated(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}
