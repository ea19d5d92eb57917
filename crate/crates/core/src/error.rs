use std::path::PathBuf;

use thiserror::Error;

use crate::model::CostModel;

/// Violations of domain-type invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("institution id is empty")]
    EmptyInstitutionId,
    #[error("publication id is empty")]
    EmptyPublicationId,
    #[error("invalid country code {0:?} (expected two uppercase letters)")]
    InvalidCountry(String),
    #[error("author position must be >= 1")]
    ZeroPosition,
    #[error("author at position {position} has no affiliations")]
    NoAffiliations { position: u32 },
    #[error("publication has no authors")]
    NoAuthors,
    #[error("publication has no document types")]
    NoDocTypes,
    #[error("author positions {0:?} are not unique and contiguous from 1")]
    BadPositions(Vec<u32>),
    #[error("unknown sector {0:?}")]
    UnknownSector(String),
    #[error("unknown cost model {0:?}")]
    UnknownModel(String),
    #[error("unknown co-operation type {0:?}")]
    UnknownCooperationType(String),
    #[error("unknown participant scope {0:?}")]
    UnknownScope(String),
    #[error("invalid corpus filter: {0}")]
    InvalidFilter(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AttributionError {
    #[error("publication {publication}: no participating institution can pay under model {model}")]
    NoEligiblePayer { publication: String, model: CostModel },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IssnError {
    #[error("malformed ISSN {0:?}")]
    Malformed(String),
    #[error("ISSN {raw:?} fails the check digit (expected {expected})")]
    ChecksumFailure { raw: String, expected: char },
}

/// File-level failures. Row-level problems are reported as warnings instead.
#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    FileUnreadable {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: missing required column {column:?}")]
    MissingColumn { path: PathBuf, column: String },
    #[error("{path}: no valid rows")]
    EmptyList { path: PathBuf },
    #[error("{path}: publication id {id:?} on line {line} already appeared on line {first_line}")]
    DuplicateId {
        path: PathBuf,
        id: String,
        line: usize,
        first_line: usize,
    },
    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error("no records match the selection")]
    EmptySelection,
    #[error("report is empty")]
    EmptyReport,
    #[error("model {0} is not present in the table")]
    ModelMissing(CostModel),
}
