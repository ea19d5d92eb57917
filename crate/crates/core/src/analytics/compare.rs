//! Pairwise model differences and sector aggregates.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};

use super::PublicationUnitsTable;
use crate::error::AnalyticsError;
use crate::model::{CostModel, InstitutionId, Sector, SectorRegistry};
use crate::numeric::{mean, median};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairwiseComparison {
    pub m1: CostModel,
    pub m2: CostModel,
    /// `cell(I, m1) - cell(I, m2)`, ordered by descending |diff| then id.
    pub diffs: Vec<(InstitutionId, BigRational)>,
    pub mean: BigRational,
    pub median: BigRational,
    pub max_abs: BigRational,
}

pub fn pairwise_model_comparison(
    table: &PublicationUnitsTable,
    m1: CostModel,
    m2: CostModel,
) -> Result<PairwiseComparison, AnalyticsError> {
    let c1 = table.column(m1).ok_or(AnalyticsError::ModelMissing(m1))?;
    let c2 = table.column(m2).ok_or(AnalyticsError::ModelMissing(m2))?;
    let mut diffs: Vec<(InstitutionId, BigRational)> = table
        .rows()
        .map(|(id, row)| (id.clone(), &row[c1] - &row[c2]))
        .collect();
    diffs.sort_by(|(ia, a), (ib, b)| Reverse(a.abs()).cmp(&Reverse(b.abs())).then_with(|| ia.cmp(ib)));
    let values: Vec<BigRational> = diffs.iter().map(|(_, d)| d.clone()).collect();
    Ok(PairwiseComparison {
        m1,
        m2,
        mean: mean(&values).unwrap_or_else(BigRational::zero),
        median: median(&values).unwrap_or_else(BigRational::zero),
        max_abs: values.iter().map(Signed::abs).max().unwrap_or_else(BigRational::zero),
        diffs,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorTotalsRow {
    pub sector: Sector,
    /// One total per model, in the table's model order.
    pub totals: Vec<BigRational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SectorTotals {
    pub models: Vec<CostModel>,
    /// Sectors with at least one institution in the table, in UNIV, MPG, HGF, WGL, FHG order.
    pub rows: Vec<SectorTotalsRow>,
    /// Institutions in the table but not in the registry; left out of every row.
    pub unknown: Vec<InstitutionId>,
}

/// Sum units per sector. An institution in several sectors counts in each.
pub fn sector_totals(table: &PublicationUnitsTable, registry: &SectorRegistry) -> SectorTotals {
    let width = table.models().len();
    let mut sums: BTreeMap<Sector, Vec<BigRational>> = BTreeMap::new();
    let mut unknown = Vec::new();
    for (id, row) in table.rows() {
        match registry.sectors(id) {
            Some(sectors) => {
                for sector in sectors {
                    let acc = sums.entry(*sector).or_insert_with(|| vec![BigRational::zero(); width]);
                    acc.iter_mut().zip(row).for_each(|(a, v)| *a += v);
                }
            }
            None => unknown.push(id.clone()),
        }
    }
    SectorTotals {
        models: table.models().to_vec(),
        rows: sums
            .into_iter()
            .map(|(sector, totals)| SectorTotalsRow { sector, totals })
            .collect(),
        unknown,
    }
}
