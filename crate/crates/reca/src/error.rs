use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

/// Coarse classification used by the CLI to pick an exit code and by log
/// consumers to route failures: bad configuration, bad input data, or a bug.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Config,
    Data,
    Internal,
}

impl ErrorCategory {
    pub fn as_str(&self) -> &'static str {
        match self {
            ErrorCategory::Config => "config",
            ErrorCategory::Data => "data",
            ErrorCategory::Internal => "internal",
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    // --- cellular automaton ---
    #[error("invalid rule number {0}: elementary CA rules are 0..=255")]
    InvalidRule(u64),
    #[error("state of length {0} cannot be evolved: need at least 3 cells")]
    StateTooShort(usize),
    #[error("invalid cell value {value} at index {index}: cells must be 0 or 1")]
    InvalidCell { index: usize, value: u8 },
    #[error("empty state is not allowed")]
    EmptyState,

    // --- encoding ---
    #[error("thermometer input {0} outside [0, 1]: normalize values first")]
    ValueOutOfRange(f64),
    #[error("cannot fit normalization: input contains no finite values")]
    NoFiniteValues,
    #[error("series of length {len} exceeds the encoder's maximum length {max_len}")]
    SeriesTooLong { len: usize, max_len: usize },

    // --- datasets ---
    #[error("{path}: bad IDX magic: expected {expected:#010x}, found {found:#010x}")]
    IdxMagic {
        path: PathBuf,
        expected: u32,
        found: u32,
    },
    #[error("{path}: truncated IDX file: expected at least {expected} bytes, found {found}")]
    IdxTruncated {
        path: PathBuf,
        expected: usize,
        found: usize,
    },
    #[error("image/label count mismatch: {images} images vs {labels} labels")]
    IdxCountMismatch { images: usize, labels: usize },
    #[error("{path}:{line}: {message}")]
    SeriesParse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("cannot concatenate datasets of different kinds or shapes")]
    DatasetShapeMismatch,
    #[error("split fraction {value} for {field} outside [0, 1)")]
    InvalidFraction { field: &'static str, value: f64 },

    // --- reservoir / features ---
    #[error("ragged samples: sample {index} has length {found}, expected {expected}")]
    RaggedSamples {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("feature/label count mismatch: {rows} rows vs {labels} labels")]
    LabelCountMismatch { rows: usize, labels: usize },

    // --- readout ---
    #[error("training data has a single class; at least 2 are required")]
    SingleClass,
    #[error("training set has {0} samples; at least 2 are required")]
    TooFewSamples(usize),
    #[error("dimension mismatch: model expects {expected} features, input has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("k = {k} exceeds the number of training samples ({n})")]
    KTooLarge { k: usize, n: usize },
    #[error("k must be at least 1")]
    KZero,
    #[error("DTW window {window} is too narrow to align series of lengths {len_x} and {len_y}")]
    BandTooNarrow {
        window: usize,
        len_x: usize,
        len_y: usize,
    },
    #[error("DTW requires nonempty series")]
    EmptySeries,
    #[error("prediction/label length mismatch: {predictions} vs {labels}")]
    PredictionCountMismatch { predictions: usize, labels: usize },

    // --- experiments ---
    #[error("error rate {0} outside [0, 1]")]
    ErrorRateOutOfRange(f64),
    #[error("improvement percentage is undefined: baseline error is 0 but error rates differ")]
    DegenerateImprovement,
    #[error("significance test requires at least 2 repetitions per arm, found {0}")]
    TooFewRepetitions(usize),
    #[error("cannot emit a report from an empty record list")]
    EmptyReport,
    #[error("config error: {0}")]
    Config(String),
    #[error("malformed report row {line}: {message}")]
    ReportParse { line: usize, message: String },

    // --- plumbing ---
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl Error {
    /// I/O error annotated with the path it happened on.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            InvalidRule(_) | InvalidFraction { .. } | KZero | Config(_) | TooFewRepetitions(_)
            | BandTooNarrow { .. } | ValueOutOfRange(_) => ErrorCategory::Config,

            StateTooShort(_) | InvalidCell { .. } | EmptyState | NoFiniteValues
            | SeriesTooLong { .. } | IdxMagic { .. } | IdxTruncated { .. }
            | IdxCountMismatch { .. } | SeriesParse { .. } | EmptyDataset
            | DatasetShapeMismatch | RaggedSamples { .. } | LabelCountMismatch { .. }
            | SingleClass | TooFewSamples(_) | KTooLarge { .. } | EmptySeries
            | ErrorRateOutOfRange(_) | Io { .. } | ReportParse { .. } => ErrorCategory::Data,

            DimensionMismatch { .. } | PredictionCountMismatch { .. }
            | DegenerateImprovement | EmptyReport | Serialize(_) => ErrorCategory::Internal,
        }
    }
}
