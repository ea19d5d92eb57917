//! OpenAPC-style payment records.

use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::{column_index, csv_error, csv_reader, normalize_issn_with, Issn, IssnPolicy, Loaded, Warning};
use crate::error::{AnalyticsError, IngestError};
use crate::numeric::parse_decimal;

/// One paid APC.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ApcPaymentRecord {
    pub institution: String,
    pub period: i32,
    /// Exact EUR amount, at most two fraction digits, always positive.
    pub euro: BigRational,
    pub is_hybrid: bool,
    pub issn: Option<Issn>,
    pub doi: Option<String>,
}

const PERIOD_RANGE: std::ops::RangeInclusive<i32> = 1990..=2100;

fn parse_bool(raw: &str) -> Option<bool> {
    match raw.trim().to_ascii_uppercase().as_str() {
        "TRUE" => Some(true),
        "FALSE" => Some(false),
        _ => None,
    }
}

fn parse_euro(raw: &str) -> Result<BigRational, String> {
    let raw = raw.trim();
    let digits_after_point = raw.split_once('.').map_or(0, |(_, f)| f.len());
    let value = parse_decimal(raw).ok_or_else(|| format!("euro {raw:?} is not a plain decimal"))?;
    if digits_after_point > 2 {
        return Err(format!("euro {raw:?} has more than two fraction digits"));
    }
    if !value.is_positive() {
        return Err(format!("euro {raw:?} must be > 0"));
    }
    Ok(value)
}

struct Columns {
    institution: usize,
    period: usize,
    euro: usize,
    is_hybrid: usize,
    issn: Option<usize>,
    doi: Option<usize>,
}

fn parse_row(
    record: &csv::StringRecord,
    cols: &Columns,
    policy: IssnPolicy,
) -> Result<(ApcPaymentRecord, Option<String>), String> {
    let cell = |i: usize| record.get(i).unwrap_or("").trim();
    let institution = cell(cols.institution);
    if institution.is_empty() {
        return Err("institution is empty".into());
    }
    let period: i32 = cell(cols.period)
        .parse()
        .map_err(|_| format!("period {:?} is not a year", cell(cols.period)))?;
    if !PERIOD_RANGE.contains(&period) {
        return Err(format!("period {period} outside 1990-2100"));
    }
    let euro = parse_euro(cell(cols.euro))?;
    let is_hybrid = parse_bool(cell(cols.is_hybrid))
        .ok_or_else(|| format!("is_hybrid {:?} is not TRUE/FALSE", cell(cols.is_hybrid)))?;
    let mut soft = None;
    let issn = match cols.issn.map(cell).filter(|s| !s.is_empty() && *s != "NA") {
        None => None,
        Some(raw) => {
            let (issn, warning) = normalize_issn_with(raw, policy).map_err(|e| e.to_string())?;
            soft = warning.map(|e| format!("accepted despite {e}"));
            Some(issn)
        }
    };
    let doi = cols
        .doi
        .map(cell)
        .filter(|s| !s.is_empty() && *s != "NA")
        .map(str::to_string);
    Ok((
        ApcPaymentRecord {
            institution: institution.to_string(),
            period,
            euro,
            is_hybrid,
            issn,
            doi,
        },
        soft,
    ))
}

/// Load payment rows. `issn` and `doi` columns are optional; extra columns are ignored.
pub fn load_apc_payments(path: &Path, policy: IssnPolicy) -> Result<Loaded<Vec<ApcPaymentRecord>>, IngestError> {
    let mut reader = csv_reader(path)?;
    let headers = reader.headers().map_err(|e| csv_error(path, e))?.clone();
    let required = |name: &str| {
        column_index(&headers, name).ok_or_else(|| IngestError::MissingColumn {
            path: path.to_path_buf(),
            column: name.into(),
        })
    };
    let cols = Columns {
        institution: required("institution")?,
        period: required("period")?,
        euro: required("euro")?,
        is_hybrid: required("is_hybrid")?,
        issn: column_index(&headers, "issn"),
        doi: column_index(&headers, "doi"),
    };

    let mut records = Vec::new();
    let mut warnings = Vec::new();
    let mut rows = 0;
    let mut rejected = 0;
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        let line = record.position().map_or(0, |p| p.line() as usize);
        rows += 1;
        let warn = |message: String| Warning {
            file: path.to_path_buf(),
            line,
            message,
        };
        match parse_row(&record, &cols, policy) {
            Ok((r, soft)) => {
                if let Some(m) = soft {
                    warnings.push(warn(m));
                }
                records.push(r);
            }
            Err(m) => {
                rejected += 1;
                warnings.push(warn(m));
            }
        }
    }
    Ok(Loaded {
        value: records,
        warnings,
        rows,
        rejected,
    })
}

/// Exact mean of `euro` over records matching the optional period and hybrid filters.
pub fn average_apc(
    records: &[ApcPaymentRecord],
    period: Option<i32>,
    hybrid: Option<bool>,
) -> Result<BigRational, AnalyticsError> {
    let mut sum = BigRational::zero();
    let mut n = 0u64;
    for r in records
        .iter()
        .filter(|r| period.is_none_or(|p| r.period == p))
        .filter(|r| hybrid.is_none_or(|h| r.is_hybrid == h))
    {
        sum += &r.euro;
        n += 1;
    }
    if n == 0 {
        return Err(AnalyticsError::EmptySelection);
    }
    Ok(sum / BigRational::from_integer(BigInt::from(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::{format_fixed, ratio};
    use std::io::Write;

    fn write(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    fn record(period: i32, hybrid: bool, euro: i64) -> ApcPaymentRecord {
        ApcPaymentRecord {
            institution: "X".into(),
            period,
            euro: ratio(euro, 1),
            is_hybrid: hybrid,
            issn: None,
            doi: None,
        }
    }

    #[test]
    fn parses_rows_and_skips_bad_ones() {
        let f = write(
            "institution,period,euro,doi,is_hybrid,publisher,issn\n\
             X,2018,1234.00,10.1/a,FALSE,P,2041-1723\n\
             X,2018,-5,10.1/b,FALSE,P,\n\
             Y,2017,990.5,,true,P,\n\
             Z,2017,12.345,,true,P,\n\
             Z,17,100,,true,P,\n",
        );
        let loaded = load_apc_payments(f.path(), IssnPolicy::Strict).unwrap();
        assert_eq!(loaded.value.len(), 2);
        assert_eq!(loaded.rows, 5);
        assert_eq!(loaded.rejected, 3);
        let first = &loaded.value[0];
        assert_eq!(first.euro, ratio(1234, 1));
        assert_eq!(first.issn.as_ref().unwrap().as_str(), "2041-1723");
        assert_eq!(first.doi.as_deref(), Some("10.1/a"));
        let second = &loaded.value[1];
        assert!(second.is_hybrid);
        assert!(second.issn.is_none());
        assert_eq!(second.euro, ratio(1981, 2));
        let lines: Vec<usize> = loaded.warnings.iter().map(|w| w.line).collect();
        assert_eq!(lines, [3, 5, 6]);
    }

    #[test]
    fn missing_required_column() {
        let f = write("institution,period,euro\nX,2018,1\n");
        assert!(matches!(
            load_apc_payments(f.path(), IssnPolicy::Strict),
            Err(IngestError::MissingColumn { .. })
        ));
    }

    #[test]
    fn average_apc_filters() {
        let recs = [
            record(2018, false, 1000),
            record(2018, false, 1500),
            record(2018, false, 2120),
        ];
        assert_eq!(format_fixed(&average_apc(&recs, None, None).unwrap(), 0), "1540");
        let recs = [
            record(2018, false, 1540),
            record(2017, false, 9999),
            record(2018, true, 3000),
        ];
        assert_eq!(average_apc(&recs, Some(2018), Some(false)).unwrap(), ratio(1540, 1));
        assert_eq!(
            average_apc(&recs, Some(2016), None),
            Err(AnalyticsError::EmptySelection)
        );
        assert_eq!(average_apc(&[], None, None), Err(AnalyticsError::EmptySelection));
    }
}
