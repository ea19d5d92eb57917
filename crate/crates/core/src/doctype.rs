//! Document types for which APCs are paid.

use std::collections::BTreeSet;

use crate::model::Publication;

/// Types that make a publication eligible.
pub const INCLUDED_TYPES: [&str; 15] = [
    "Article",
    "Review",
    "Editorial Material",
    "Editorial",
    "Letter",
    "Data Paper",
    "Correction",
    "Unspecified",
    "Book Review",
    "Database Review",
    "Software Review",
    "News",
    "Retracted Publication",
    "News Item",
    "Retraction",
];

/// Types that never make a publication eligible on their own but do not veto
/// an included type assigned alongside them.
pub const EXCLUDED_TYPES: [&str; 6] = [
    "Meeting",
    "Proceedings Paper",
    "Book",
    "Book Chapter",
    "Abstract",
    "Meeting Abstract",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DocTypeClass {
    Included,
    Excluded,
    Unknown,
}

/// Case-insensitive lookup after trimming.
pub fn doc_type_class(doc_type: &str) -> DocTypeClass {
    let t = doc_type.trim();
    if INCLUDED_TYPES.iter().any(|k| k.eq_ignore_ascii_case(t)) {
        DocTypeClass::Included
    } else if EXCLUDED_TYPES.iter().any(|k| k.eq_ignore_ascii_case(t)) {
        DocTypeClass::Excluded
    } else {
        DocTypeClass::Unknown
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocTypeVerdict {
    pub included: bool,
    /// Types on neither list; worth a warning, never an error.
    pub unknown: BTreeSet<String>,
}

pub fn doc_type_verdict(publication: &Publication) -> DocTypeVerdict {
    let mut included = false;
    let mut unknown = BTreeSet::new();
    for t in &publication.doc_types {
        match doc_type_class(t) {
            DocTypeClass::Included => included = true,
            DocTypeClass::Excluded => {}
            DocTypeClass::Unknown => {
                unknown.insert(t.clone());
            }
        }
    }
    DocTypeVerdict { included, unknown }
}

/// True iff at least one document type is on the inclusion list.
pub fn is_included_document(publication: &Publication) -> bool {
    let verdict = doc_type_verdict(publication);
    for t in &verdict.unknown {
        log::warn!("publication {}: unknown document type {t:?}", publication.id);
    }
    verdict.included
}
