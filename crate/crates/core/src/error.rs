use std::path::PathBuf;

use thiserror::Error;

use crate::model::{CompanyId, DirectorId};

/// Fatal ingest failures. Row-level problems are diagnostics, not errors.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("{file}: cannot read source: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{file}: missing or unreadable header row: {message}")]
    Header { file: String, message: String },
    #[error("{file}: header is missing required column {column}")]
    MissingColumn { file: String, column: String },
    #[error("header mapping line {line}: {message}")]
    Mapping { line: usize, message: String },
    #[error("{stage} stage failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<IngestError>,
    },
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("manifest: {0}")]
    Manifest(String),
    #[error("table {table}: {message}")]
    Table { table: String, message: String },
    #[error("snapshot invariant violated: {0}")]
    Invalid(String),
}

/// Errors raised by graph and analytics queries.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum QueryError {
    #[error("unknown director {id} ({endpoint})")]
    UnknownDirector { id: DirectorId, endpoint: &'static str },
    #[error("unknown company {0}")]
    UnknownCompany(CompanyId),
    #[error("company {0} has no seats with tenure")]
    NoTenure(CompanyId),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

#[derive(Debug, Error, Clone, PartialEq)]
#[error("invalid synth config: {field}: {message}")]
pub struct SynthConfigError {
    pub field: String,
    pub message: String,
}
