use thiserror::Error;

use crate::sobol::DirectionTableError;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("point count must be at least 1")]
    ZeroCount,

    #[error("point data length {len} is not a multiple of dimension {dim}")]
    RaggedPoints { len: usize, dim: usize },

    #[error("coordinate {value} of point {point} lies outside [0, 1)")]
    CoordinateOutOfRange { point: usize, value: f64 },

    #[error("expected {expected} points, got {actual}")]
    WrongCardinality { expected: usize, actual: usize },

    #[error("point dimension {actual} does not match requested dimension {expected}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("requested dimension {requested} exceeds the {available} dimensions of the direction table")]
    DimensionExceedsTable { requested: usize, available: usize },

    #[error("dimension {requested} exceeds the supported maximum {max}")]
    DimensionTooLarge { requested: usize, max: usize },

    #[error("Sobol' index {0} exceeds the 32-bit generator range")]
    IndexOverflow(u64),

    #[error("at least {required} points are required, got {actual}")]
    TooFewPoints { required: usize, actual: usize },

    #[error(
        "exact star discrepancy for {count} points in dimension {dim} is too expensive; use l2_discrepancy instead"
    )]
    StarDiscrepancyTooLarge { count: usize, dim: usize },

    #[error("squared L2 discrepancy evaluated to {0}, which is numerically impossible")]
    NegativeDiscrepancy(f64),

    #[error("grid oracle supports dimensions 1 to 3, got {0}")]
    OracleDimension(usize),

    #[error("grid resolution must be at least 1")]
    ZeroGrid,

    #[error("unknown test function {0:?}")]
    UnknownFunction(String),

    #[error("invalid function spec {0:?}: expected <id>:<dim>, e.g. 1A:360")]
    InvalidFunctionSpec(String),

    #[error("total variance is zero; sensitivity indices are undefined")]
    ZeroVariance,

    #[error("subset must be non-empty and contain variables 1..={dim}")]
    InvalidSubset { dim: usize },

    #[error("at least {required} base samples are required, got {actual}")]
    TooFewBaseSamples { required: usize, actual: usize },

    #[error("probability {0} must lie strictly inside (0, 1)")]
    ProbabilityOutOfRange(f64),

    #[error("empirical quantile of an empty sample")]
    EmptySample,

    #[error("slope fit needs at least 3 rows, got {0}")]
    TooFewRows(usize),

    #[error("slope fit needs positive errors, got {0} at N = {1}")]
    NonPositiveError(f64, u64),

    #[error("at least 2 replicates are required, got {0}")]
    TooFewReplicates(usize),

    #[error("invalid log2 N range {0}..={1}")]
    InvalidRange(u32, u32),

    #[error(transparent)]
    DirectionTable(#[from] DirectionTableError),

    #[error("points CSV: {0}")]
    PointsCsv(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
