use std::path::PathBuf;

use crate::geometry::Point;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("point set is empty")]
    EmptyInput,

    #[error("point {point} lies outside the bounding box")]
    PointOutsideBox { point: Point },

    #[error("point {point} is outside the {m1}x{m2} rank grid")]
    OutOfGrid { point: Point, m1: u64, m2: u64 },

    #[error("rank {rank} is outside 1..={m}")]
    RankOutOfRange { rank: u64, m: u64 },

    #[error("points {first} and {second} share rank {rank}")]
    DuplicatePoint { first: usize, second: usize, rank: u64 },

    #[error("rank range m = {m} exceeds the configured cap of {max_m}")]
    BoxTooLarge { m: u128, max_m: u64 },

    #[error("{count} points cannot be indexed by a rank table")]
    TooManyPoints { count: usize },

    #[error("coordinate {value} does not fit in {bits} signed bits")]
    CoordinateOverflow { value: i128, bits: u32 },

    #[error("invalid counts: n = {n}, m = {m}")]
    InvalidCounts { n: u128, m: u128 },

    #[error("invalid density {0}: expected 0 < D <= 1")]
    InvalidDensity(f64),

    #[error("unsupported block width {0}: expected 4, 8, 16, 32 or 64")]
    UnsupportedBlockWidth(u32),

    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("unsupported image format {0:?}")]
    UnsupportedFormat(String),

    #[error("malformed image header: {0}")]
    MalformedHeader(String),

    #[error("image data ended after {got} of {expected} samples")]
    TruncatedRaster { expected: usize, got: usize },

    #[error("threshold {threshold} outside sample range 1..={maxval}")]
    InvalidThreshold { threshold: u32, maxval: u32 },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
