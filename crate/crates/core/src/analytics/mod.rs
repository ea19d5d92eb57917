//! Aggregation of per-publication shares and the comparative reports built on them.
//!
//! Values stay exact until a report is written; see [`crate::report`].

mod compare;
mod profile;
mod range;
mod units;

pub use compare::{pairwise_model_comparison, sector_totals, PairwiseComparison, SectorTotals, SectorTotalsRow};
pub use profile::{
    author_count_distribution, author_role_shares, cooperation_distribution, AuthorCountDistribution, AuthorRole,
    BoxStats, CoopBreakdown, CoopDistribution, RoleShareRow, RoleShares, QUARTILE_RULE,
};
pub use range::{estimate_cost, median_range, range_report, RangeReportRow};
#[cfg(feature = "parallel")]
pub use units::compute_publication_units_parallel;
pub use units::{compute_publication_units, compute_publication_units_sequential, Exclusion, PublicationUnitsTable};
