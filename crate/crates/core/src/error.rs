//! Error type shared by every module.

use thiserror::Error;

/// All failure modes of the crate.
///
/// Each variant has a stable machine-greppable code (see [`SsaError::code`])
/// which the CLI prints as `error[<code>]: <message>`.
#[derive(Debug, Error)]
pub enum SsaError {
    #[error("window length {window} must satisfy 1 < L < {series_len}")]
    WindowOutOfRange { window: usize, series_len: usize },

    #[error("series of length {len} is too short (need at least 3 values)")]
    SeriesTooShort { len: usize },

    #[error("{context} contains a non-finite value")]
    NonFinite { context: &'static str },

    #[error("expected length {expected}, got {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{context}: expected dimension {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("polynomial degree {degree} too large for dimension {ambient}")]
    DegreeTooLarge { degree: usize, ambient: usize },

    #[error("basis input is empty or spans nothing")]
    EmptyBasis,

    #[error("a projection spec needs at least one of a row or column basis")]
    NoProjector,

    #[error("grouping splits the projection components 1..{proj_count}")]
    SplitProjectionGroup { proj_count: usize },

    #[error("triple index {index} out of range 1..{count}")]
    IndexOutOfRange { index: usize, count: usize },

    #[error("triple index {index} appears in more than one group")]
    OverlappingGroups { index: usize },

    #[error("duplicate group name `{name}`")]
    DuplicateGroupName { name: String },

    #[error("index {index} refers to a projection triple, not an SVD triple")]
    ProjectionTripleInExtras { index: usize },

    #[error("decomposition has zero total magnitude; contributions are undefined")]
    ZeroDecomposition,

    #[error("trailing LRR coefficient must be nonzero")]
    InvalidLrr,

    #[error("invalid signal spec: {0}")]
    InvalidSignalSpec(String),

    #[error("noise standard deviation must be nonnegative, got {0}")]
    NegativeSigma(f64),

    #[error("least-squares solve failed (singular design matrix)")]
    SingularDesign,

    #[error("invalid config: {0}")]
    ConfigInvalid(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl SsaError {
    /// Stable kebab-case code for scripting against CLI stderr.
    pub fn code(&self) -> &'static str {
        match self {
            SsaError::WindowOutOfRange { .. } => "window-out-of-range",
            SsaError::SeriesTooShort { .. } => "series-too-short",
            SsaError::NonFinite { .. } => "non-finite-value",
            SsaError::LengthMismatch { .. } => "length-mismatch",
            SsaError::DimensionMismatch { .. } => "dimension-mismatch",
            SsaError::DegreeTooLarge { .. } => "degree-too-large",
            SsaError::EmptyBasis => "empty-basis",
            SsaError::NoProjector => "no-projector",
            SsaError::SplitProjectionGroup { .. } => "split-projection-group",
            SsaError::IndexOutOfRange { .. } => "index-out-of-range",
            SsaError::OverlappingGroups { .. } => "overlapping-groups",
            SsaError::DuplicateGroupName { .. } => "duplicate-group-name",
            SsaError::ProjectionTripleInExtras { .. } => "projection-triple-in-extras",
            SsaError::ZeroDecomposition => "zero-decomposition",
            SsaError::InvalidLrr => "invalid-lrr",
            SsaError::InvalidSignalSpec(_) => "invalid-signal-spec",
            SsaError::NegativeSigma(_) => "negative-sigma",
            SsaError::SingularDesign => "singular-design",
            SsaError::ConfigInvalid(_) => "config-invalid",
            SsaError::Parse(_) => "parse-error",
            SsaError::Io(_) => "io-error",
        }
    }

    /// True for errors caused by malformed input files, flags or configs
    /// (CLI exit code 2); false for numeric/validation failures (exit 3).
    pub fn is_usage(&self) -> bool {
        matches!(
            self,
            SsaError::ConfigInvalid(_) | SsaError::Parse(_) | SsaError::Io(_)
        )
    }
}
