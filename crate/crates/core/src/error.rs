//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("i/o error reading {path} at line {line}: {source}")]
    LineIo {
        path: PathBuf,
        line: usize,
        #[source]
        source: std::io::Error,
    },

    #[error("document {0} has no sentences")]
    EmptyDocument(String),

    #[error("document {0} has no reference summary")]
    MissingReference(String),

    #[error("graph has no word nodes")]
    NoWordNodes,

    #[error("unknown node {0}")]
    UnknownNode(String),

    #[error("non-finite value in update {0}")]
    NonFinite(u64),

    #[error("non-finite similarity between sentences {0} and {1}")]
    NonFiniteSimilarity(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("malformed data in {path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("predictions without a reference: {0:?}")]
    MissingIds(Vec<String>),

    #[error("document {id}: {source}")]
    Document {
        id: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// Wrap an error with the id of the document being processed.
    pub fn for_document(self, id: &str) -> Error {
        Error::Document {
            id: id.to_string(),
            source: Box::new(self),
        }
    }
}
