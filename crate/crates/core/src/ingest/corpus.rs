//! JSON Lines publication corpus.

use std::collections::{BTreeSet, HashMap};
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{read_to_string, Loaded, Warning};
use crate::error::{IngestError, ModelError};
use crate::model::{Affiliation, AuthorRecord, Publication};

#[derive(Debug, Serialize, Deserialize)]
struct AffiliationLine {
    institution_id: String,
    country: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct AuthorLine {
    position: u32,
    is_reprint: bool,
    affiliations: Vec<AffiliationLine>,
}

#[derive(Debug, Serialize, Deserialize)]
struct PublicationLine {
    id: String,
    year: i32,
    doc_types: Vec<String>,
    #[serde(default)]
    issns: Vec<String>,
    authors: Vec<AuthorLine>,
}

impl TryFrom<PublicationLine> for Publication {
    type Error = ModelError;

    fn try_from(line: PublicationLine) -> Result<Self, Self::Error> {
        let authors = line
            .authors
            .into_iter()
            .map(|a| {
                let affiliations = a
                    .affiliations
                    .into_iter()
                    .map(|af| Affiliation::new(&af.institution_id, &af.country))
                    .collect::<Result<Vec<_>, _>>()?;
                AuthorRecord::new(a.position, a.is_reprint, affiliations)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Publication::new(
            line.id,
            line.year,
            line.doc_types.into_iter().collect::<BTreeSet<_>>(),
            line.issns.into_iter().collect::<BTreeSet<_>>(),
            authors,
        )
    }
}

impl From<&Publication> for PublicationLine {
    fn from(p: &Publication) -> Self {
        PublicationLine {
            id: p.id.clone(),
            year: p.year,
            doc_types: p.doc_types.iter().cloned().collect(),
            issns: p.issns.iter().cloned().collect(),
            authors: p
                .authors()
                .iter()
                .map(|a| AuthorLine {
                    position: a.position,
                    is_reprint: a.is_reprint,
                    affiliations: a
                        .affiliations()
                        .iter()
                        .map(|af| AffiliationLine {
                            institution_id: af.institution.to_string(),
                            country: af.country.to_string(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

fn parse_line(text: &str) -> Result<Publication, String> {
    let raw: PublicationLine = serde_json::from_str(text).map_err(|e| format!("schema violation: {e}"))?;
    Publication::try_from(raw).map_err(|e| format!("schema violation: {e}"))
}

/// Parse corpus text. `origin` is only used in warnings and errors.
pub fn parse_corpus_str(text: &str, origin: &Path) -> Result<Loaded<Vec<Publication>>, IngestError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty())
        .collect();

    let parsed = crate::par::map_ordered(&lines, |(n, l)| (*n, parse_line(l)));

    let mut publications = Vec::with_capacity(parsed.len());
    let mut warnings = Vec::new();
    let mut first_seen: HashMap<String, usize> = HashMap::new();
    for (line, result) in parsed {
        match result {
            Ok(p) => {
                if let Some(&first_line) = first_seen.get(&p.id) {
                    return Err(IngestError::DuplicateId {
                        path: origin.to_path_buf(),
                        id: p.id,
                        line,
                        first_line,
                    });
                }
                first_seen.insert(p.id.clone(), line);
                publications.push(p);
            }
            Err(message) => warnings.push(Warning {
                file: origin.to_path_buf(),
                line,
                message,
            }),
        }
    }
    Ok(Loaded {
        rows: lines.len(),
        rejected: warnings.len(),
        value: publications,
        warnings,
    })
}

/// Read a JSON Lines corpus. Invalid lines are skipped with a warning;
/// a repeated publication id is a hard error.
pub fn parse_publication_corpus(path: &Path) -> Result<Loaded<Vec<Publication>>, IngestError> {
    let text = read_to_string(path)?;
    parse_corpus_str(&text, path)
}

/// Compact single-line JSON for one publication.
pub fn publication_to_json(publication: &Publication) -> String {
    serde_json::to_string(&PublicationLine::from(publication)).expect("plain data serializes")
}

pub fn write_publication_corpus<W: Write>(mut out: W, corpus: &[Publication]) -> std::io::Result<()> {
    for p in corpus {
        writeln!(out, "{}", publication_to_json(p))?;
    }
    Ok(())
}
