use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse group spec {0:?}")]
    GroupParse(String),

    #[error("group mismatch: {left} vs {right}")]
    GroupMismatch { left: String, right: String },

    #[error("group of order {order} exceeds the enumeration bound {bound}")]
    BoundExceeded { order: usize, bound: usize },

    #[error("element {0:?} is not a valid group element")]
    InvalidElement(Vec<u64>),

    #[error("homomorphism is not well defined: {0}")]
    IllDefined(String),

    #[error("homomorphism is not symmetric")]
    NotSymmetric,

    #[error("subgroup is not isotropic")]
    NotIsotropic,

    #[error("zero window")]
    ZeroWindow,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
