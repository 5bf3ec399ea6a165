use crate::hamsandwich::BisectionCertificate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("segment endpoints coincide")]
    DegenerateSegment,

    /// The restricted polynomial vanishes identically, i.e. the line or
    /// segment lies inside the zero set.
    #[error("polynomial vanishes identically on the line")]
    ContainedInZeroSet,

    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,

    #[error("empty interval: lower end must be below upper end")]
    EmptyInterval,

    #[error("no verified bisecting polynomial of degree {degree} after {attempts} restarts")]
    BisectionNotFound {
        degree: u32,
        attempts: usize,
        best: Box<BisectionCertificate>,
    },

    #[error("exhaustive oracle limits exceeded: {0}")]
    OracleLimit(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("partition round {round}: {source}")]
    PartitionRound { round: usize, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
