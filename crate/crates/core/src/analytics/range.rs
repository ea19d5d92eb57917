//! Spread between the cheapest and most expensive model per institution.

use std::cmp::Reverse;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::PublicationUnitsTable;
use crate::error::AnalyticsError;
use crate::model::{CostModel, InstitutionId};
use crate::numeric::{median, round_half_up, round_scaled};

/// Min/max units of one institution. `pu_min` and `pu_max` are rounded
/// half-up to two decimals; `pu_diff` is their exact difference.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeReportRow {
    pub institution: InstitutionId,
    pub pu_min: BigRational,
    pub pu_max: BigRational,
    pub pu_diff: BigRational,
    pub model_min: CostModel,
    pub model_max: CostModel,
}

impl RangeReportRow {
    /// Builds a row from exact extremes; rounding happens here.
    pub fn new(
        institution: InstitutionId,
        exact_min: &BigRational,
        exact_max: &BigRational,
        model_min: CostModel,
        model_max: CostModel,
    ) -> Self {
        let pu_min = round_half_up(exact_min, 2);
        let pu_max = round_half_up(exact_max, 2);
        let pu_diff = &pu_max - &pu_min;
        Self {
            institution,
            pu_min,
            pu_max,
            pu_diff,
            model_min,
            model_max,
        }
    }
}

/// One row per institution, sorted by `pu_diff` descending, then institution id.
/// Ties between models resolve to the earlier model (1, 2, 3, 4a, 4b).
pub fn range_report(table: &PublicationUnitsTable) -> Vec<RangeReportRow> {
    let models = table.models();
    let mut rows: Vec<RangeReportRow> = table
        .rows()
        .filter(|_| !models.is_empty())
        .map(|(id, values)| {
            let mut lo = 0;
            let mut hi = 0;
            for (i, v) in values.iter().enumerate() {
                // strict comparisons keep the first model on ties
                if *v < values[lo] {
                    lo = i;
                }
                if *v > values[hi] {
                    hi = i;
                }
            }
            RangeReportRow::new(id.clone(), &values[lo], &values[hi], models[lo], models[hi])
        })
        .collect();
    rows.sort_by(|a, b| {
        Reverse(&a.pu_diff)
            .cmp(&Reverse(&b.pu_diff))
            .then_with(|| a.institution.cmp(&b.institution))
    });
    rows
}

/// Median `pu_diff`, rounded half-up to two decimals.
pub fn median_range(report: &[RangeReportRow]) -> Result<BigRational, AnalyticsError> {
    let diffs: Vec<BigRational> = report.iter().map(|r| r.pu_diff.clone()).collect();
    let m = median(&diffs).ok_or(AnalyticsError::EmptyReport)?;
    Ok(round_half_up(&m, 2))
}

/// `pu * avg_apc`, rounded half-up to whole euros.
pub fn estimate_cost(pu: &BigRational, avg_apc: &BigRational) -> BigInt {
    round_scaled(&(pu * avg_apc), 0)
}
