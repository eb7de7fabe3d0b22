use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path} is not valid UTF-8 (first bad byte at offset {offset})")]
    Encoding { path: PathBuf, offset: usize },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("duplicate id {0:?}")]
    DuplicateId(String),
    #[error("document {0:?} is empty after normalization")]
    EmptyDocument(String),
    #[error("segmentation failed: {0}")]
    Segmentation(String),
    #[error("token stream is empty")]
    EmptyStream,
    #[error("vocabulary exhausted: requested {requested} nodes, only {available} distinct tokens")]
    VocabularyExhausted { requested: usize, available: usize },
    #[error("network is disconnected: node {node} unreachable")]
    Disconnected { node: usize },
    #[error("degree tail too short: {distinct} distinct degrees >= {kmin}, need {required}")]
    InsufficientTail {
        kmin: usize,
        distinct: usize,
        required: usize,
    },
    #[error("vocabulary too small: {types} types, need {required}")]
    TooSmallVocabulary { types: usize, required: usize },
    #[error("empty group")]
    EmptyGroup,
    #[error("mixed curve modes in group")]
    MixedModes,
    #[error("pole in random-regime length at N={n}: denominator {denominator}")]
    Pole { n: f64, denominator: f64 },
    #[error("fit diverged: {0}")]
    FitDiverged(String),
    #[error("curve too short to fit: {0}")]
    CurveTooShort(String),
    #[error("generator saturated at step {step}: no free target after {retries} draws")]
    Saturation { step: u64, retries: u32 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

impl Error {
    /// Stable machine-readable kind, used in error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Io { .. } => "IoError",
            Error::Encoding { .. } => "EncodingError",
            Error::Parse { .. } => "ParseError",
            Error::DuplicateId(_) => "DuplicateIdError",
            Error::EmptyDocument(_) => "EmptyDocumentError",
            Error::Segmentation(_) => "SegmentationError",
            Error::EmptyStream => "EmptyStreamError",
            Error::VocabularyExhausted { .. } => "VocabularyExhaustedError",
            Error::Disconnected { .. } => "DisconnectedError",
            Error::InsufficientTail { .. } => "InsufficientTailError",
            Error::TooSmallVocabulary { .. } => "TooSmallVocabularyError",
            Error::EmptyGroup => "EmptyGroupError",
            Error::MixedModes => "MixedModesError",
            Error::Pole { .. } => "PoleError",
            Error::FitDiverged(_) => "FitDivergedError",
            Error::CurveTooShort(_) => "CurveTooShortError",
            Error::Saturation { .. } => "SaturationError",
            Error::InvalidConfig(_) => "InvalidConfigError",
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
