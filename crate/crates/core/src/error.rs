use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the embedding and evaluation pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty vocabulary: no word reaches min_count {min_count}")]
    EmptyVocabulary { min_count: usize },

    #[error("training split must contain both classes ({positive} positive, {negative} negative documents)")]
    SingleClass { positive: usize, negative: usize },

    #[error("class corpus is empty: {0}")]
    EmptyClassCorpus(&'static str),

    #[error("row {row} is all zero")]
    ZeroRow { row: usize },

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("empty dictionary")]
    EmptyLexicon,

    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("inputs come from different runs (fingerprints {})", .0.join(", "))]
    FingerprintMismatch(Vec<String>),

    #[error("word {word:?} is not in the vocabulary{}", suggestion_suffix(.suggestions))]
    UnknownWord { word: String, suggestions: Vec<String> },
}

fn suggestion_suffix(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!(" (closest: {})", suggestions.join(", "))
    }
}

impl Error {
    /// Short stable identifier, used as the machine-readable prefix by the CLI.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidConfig(_) => "config",
            Error::EmptyVocabulary { .. } => "empty-vocabulary",
            Error::SingleClass { .. } => "single-class",
            Error::EmptyClassCorpus(_) => "empty-class",
            Error::ZeroRow { .. } => "zero-row",
            Error::EmptyMatrix => "empty-matrix",
            Error::NonFinite { .. } => "non-finite",
            Error::DimensionMismatch { .. } => "dimension",
            Error::LengthMismatch { .. } => "length",
            Error::Decomposition(_) => "decomposition",
            Error::EmptyLexicon => "empty-dictionary",
            Error::Parse { .. } => "parse",
            Error::Io { .. } => "io",
            Error::UnknownWord { .. } => "unknown-word",
            Error::FingerprintMismatch(_) => "fingerprint-mismatch",
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
