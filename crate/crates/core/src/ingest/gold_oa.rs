use std::collections::BTreeSet;
use std::path::Path;

use super::{
    column_index, csv_error, csv_reader, normalize_issn, normalize_issn_with, Issn, IssnPolicy, Loaded, Warning,
};
use crate::error::IngestError;
use crate::model::Publication;

/// Journals publishing every article openly, keyed by normalized ISSN.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GoldOaIssnList {
    issns: BTreeSet<Issn>,
}

impl GoldOaIssnList {
    pub fn contains(&self, issn: &Issn) -> bool {
        self.issns.contains(issn)
    }

    pub fn len(&self) -> usize {
        self.issns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.issns.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Issn> {
        self.issns.iter()
    }
}

impl FromIterator<Issn> for GoldOaIssnList {
    fn from_iter<T: IntoIterator<Item = Issn>>(iter: T) -> Self {
        Self {
            issns: iter.into_iter().collect(),
        }
    }
}

/// Load a CSV with an `issn` column. Invalid rows are skipped with a warning
/// carrying the file line number.
pub fn load_gold_oa_list(path: &Path, policy: IssnPolicy) -> Result<Loaded<GoldOaIssnList>, IngestError> {
    let mut reader = csv_reader(path)?;
    let headers = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) => return Err(csv_error(path, e)),
    };
    if headers.is_empty() || (headers.len() == 1 && headers[0].trim().is_empty()) {
        return Err(IngestError::EmptyList {
            path: path.to_path_buf(),
        });
    }
    let col = column_index(&headers, "issn").ok_or_else(|| IngestError::MissingColumn {
        path: path.to_path_buf(),
        column: "issn".into(),
    })?;

    let mut issns = BTreeSet::new();
    let mut warnings = Vec::new();
    let mut rows = 0;
    let mut rejected = 0;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows += 1;
        let raw = record.get(col).unwrap_or("").trim();
        match normalize_issn_with(raw, policy) {
            Ok((issn, soft)) => {
                if let Some(e) = soft {
                    warnings.push(Warning {
                        file: path.to_path_buf(),
                        line,
                        message: format!("accepted despite {e}"),
                    });
                }
                issns.insert(issn);
            }
            Err(e) => {
                rejected += 1;
                warnings.push(Warning {
                    file: path.to_path_buf(),
                    line,
                    message: e.to_string(),
                });
            }
        }
    }
    if issns.is_empty() {
        return Err(IngestError::EmptyList {
            path: path.to_path_buf(),
        });
    }
    Ok(Loaded {
        value: GoldOaIssnList { issns },
        warnings,
        rows,
        rejected,
    })
}

/// True iff any of the publication's ISSNs normalizes to a listed one.
pub fn is_gold_oa(publication: &Publication, list: &GoldOaIssnList) -> bool {
    publication
        .issns
        .iter()
        .filter_map(|raw| normalize_issn(raw).ok())
        .any(|issn| list.contains(&issn))
}
