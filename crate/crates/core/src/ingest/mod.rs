//! Reading and validating input files, and the corpus filter.
//!
//! Row-level problems are collected as [`Warning`]s and the row is skipped;
//! only structural problems (unreadable file, duplicate publication ids,
//! missing columns, nothing usable) are errors.

mod corpus;
mod filter;
mod gold_oa;
mod issn;
mod payments;
mod registry;

use std::fmt;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

pub use corpus::{parse_corpus_str, parse_publication_corpus, publication_to_json, write_publication_corpus};
pub use filter::{filter_corpus, filter_corpus_audited, CorpusFilter, FilterAudit, FilterStage};
pub use gold_oa::{is_gold_oa, load_gold_oa_list, GoldOaIssnList};
pub use issn::{check_character, normalize_issn, normalize_issn_with, Issn, IssnPolicy};
pub use payments::{average_apc, load_apc_payments, ApcPaymentRecord};
pub use registry::load_sector_registry;

use crate::error::IngestError;

/// A skipped or suspicious row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Warning {
    pub file: PathBuf,
    pub line: usize,
    pub message: String,
}

impl fmt::Display for Warning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.file.display(), self.line, self.message)
    }
}

/// A loaded input together with what was skipped along the way.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: Vec<Warning>,
    /// Number of data rows seen (header and blank lines excluded).
    pub rows: usize,
    /// Rows dropped with a warning. `rows - rejected` rows were accepted.
    pub rejected: usize,
}

fn open(path: &Path) -> Result<BufReader<File>, IngestError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| IngestError::FileUnreadable {
            path: path.to_path_buf(),
            source,
        })
}

fn read_to_string(path: &Path) -> Result<String, IngestError> {
    let mut s = String::new();
    open(path)?
        .read_to_string(&mut s)
        .map_err(|source| IngestError::FileUnreadable {
            path: path.to_path_buf(),
            source,
        })?;
    Ok(s)
}

/// Header lookup for CSV inputs: case-insensitive, whitespace-trimmed.
fn column_index(headers: &csv::StringRecord, name: &str) -> Option<usize> {
    headers.iter().position(|h| h.trim().eq_ignore_ascii_case(name))
}

fn csv_reader(path: &Path) -> Result<csv::Reader<BufReader<File>>, IngestError> {
    Ok(csv::ReaderBuilder::new().flexible(true).from_reader(open(path)?))
}

fn csv_error(path: &Path, source: csv::Error) -> IngestError {
    IngestError::Csv {
        path: path.to_path_buf(),
        source,
    }
}
