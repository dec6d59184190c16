use std::path::PathBuf;

/// Errors raised anywhere in the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("degenerate LFSR state")]
    DegenerateLfsrState,

    #[error("sequence period below maximum: period {period}, expected {expected}")]
    PeriodBelowMaximum { period: usize, expected: usize },

    #[error("invalid LFSR parameters: {0}")]
    InvalidLfsr(String),

    #[error("invalid sequence length {len}: {reason}")]
    SequenceLength { len: usize, reason: &'static str },

    #[error("invalid radar configuration: {0}")]
    InvalidConfig(String),

    #[error("range alias: target at {range_m} m is outside [0, {limit_m}) m")]
    RangeAlias { range_m: f64, limit_m: f64 },

    #[error("velocity alias: target at {velocity_mps} m/s is outside (-{limit_mps}, {limit_mps}) m/s")]
    VelocityAlias { velocity_mps: f64, limit_mps: f64 },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("double quantization: cube is already one-bit valued")]
    DoubleQuantization,

    #[error("accumulation factor {factor} does not divide {m_raw} pulses")]
    NonDivisibleAccumulation { m_raw: usize, factor: usize },

    #[error("degenerate map: every element is zero")]
    DegenerateMap,

    #[error("map is not peak-normalized")]
    NotNormalized,

    #[error("Doppler column {0} is all zeros")]
    ZeroColumn(usize),

    #[error("index {index} out of range (len {len})")]
    OutOfRange { index: usize, len: usize },

    #[error("guard window {guard} leaves no sidelobe cells in a column of {len}")]
    GuardTooWide { guard: usize, len: usize },

    #[error("invalid corpus spec: {0}")]
    InvalidCorpus(String),

    #[error("unsupported dataset version {found} (expected {expected})")]
    VersionMismatch { found: u32, expected: u32 },

    #[error("checksum failure in record {record_id}: stored {stored:#010x}, computed {computed:#010x}")]
    Checksum { record_id: u64, stored: u32, computed: u32 },

    #[error("record {0} not found")]
    RecordNotFound(u64),

    #[error("malformed data: {0}")]
    Malformed(String),

    #[error("record {record_id}: {source}")]
    Record {
        record_id: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("cannot access {path}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Parse { path: PathBuf, message: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
