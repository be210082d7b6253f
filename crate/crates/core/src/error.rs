use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid gauge: {0}")]
    InvalidGauge(String),

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("domain is not balanced: {0}")]
    NotBalanced(String),

    #[error("domain is not Reinhardt: {0}")]
    NotReinhardt(String),

    #[error("domain is unbounded")]
    Unbounded,

    #[error("point lies outside the domain: {0}")]
    OutsideDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("quadrature failure: {0}")]
    Quadrature(String),

    #[error(
        "Gram matrix numerically singular at degree {failed_degree} (requested {requested}); \
         largest usable degree: {usable:?}"
    )]
    SingularGram {
        requested: usize,
        failed_degree: usize,
        usable: Option<usize>,
    },

    #[error("containment could not be certified: {0}")]
    Containment(String),

    #[error("coincident points")]
    CoincidentPoints,

    #[error("volume estimate is zero or failed: {0}")]
    ZeroVolume(String),

    #[error("covering too coarse: {0}")]
    TooCoarse(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("malformed parameters for `{check}`: {reason}")]
    MalformedParameters { check: String, reason: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
