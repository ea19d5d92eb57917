//! Corpus restriction predicates with a per-stage audit trail.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{is_gold_oa, GoldOaIssnList};
use crate::cooperation::classify_cooperation;
use crate::doctype::is_included_document;
use crate::error::ModelError;
use crate::model::{AuthorRecord, CooperationType, Publication, SectorRegistry};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusFilter {
    /// Inclusive publication-year range; `None` keeps every year.
    pub year_range: Option<(i32, i32)>,
    /// Accepted co-operation types; `None` keeps every type.
    pub coop_types: Option<BTreeSet<CooperationType>>,
    pub require_gold_oa: bool,
    pub require_included_doctype: bool,
    /// Position-1 author and at least one reprint author must each have a
    /// German affiliation listed in the sector registry.
    pub require_sector_first_and_reprint: bool,
}

impl CorpusFilter {
    /// 2014-2018, national co-operation types only, every predicate on.
    pub fn replication() -> Self {
        Self {
            year_range: Some((2014, 2018)),
            coop_types: Some([CooperationType::K0, CooperationType::KN, CooperationType::KNSec].into()),
            require_gold_oa: true,
            require_included_doctype: true,
            require_sector_first_and_reprint: true,
        }
    }

    /// Every predicate off: the identity filter.
    pub fn disabled() -> Self {
        Self {
            year_range: None,
            coop_types: None,
            require_gold_oa: false,
            require_included_doctype: false,
            require_sector_first_and_reprint: false,
        }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if let Some((lo, hi)) = self.year_range {
            if lo > hi {
                return Err(ModelError::InvalidFilter(format!("year range {lo}:{hi} has min > max")));
            }
        }
        if self.coop_types.as_ref().is_some_and(BTreeSet::is_empty) {
            return Err(ModelError::InvalidFilter("co-operation type set is empty".into()));
        }
        Ok(())
    }
}

impl Default for CorpusFilter {
    fn default() -> Self {
        Self::replication()
    }
}

/// Filter stages in the order they are applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum FilterStage {
    Input,
    Year,
    DocumentType,
    GoldOa,
    Cooperation,
    SectorRoles,
}

impl FilterStage {
    pub fn label(self) -> &'static str {
        match self {
            FilterStage::Input => "input",
            FilterStage::Year => "year",
            FilterStage::DocumentType => "document_type",
            FilterStage::GoldOa => "gold_oa",
            FilterStage::Cooperation => "cooperation",
            FilterStage::SectorRoles => "sector_first_and_reprint",
        }
    }
}

impl fmt::Display for FilterStage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Corpus size after each enabled stage, overall and per year.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FilterAudit {
    pub stages: Vec<(FilterStage, usize, BTreeMap<i32, usize>)>,
}

impl FilterAudit {
    fn record(&mut self, stage: FilterStage, corpus: &[&Publication]) {
        let mut by_year = BTreeMap::new();
        for p in corpus {
            *by_year.entry(p.year).or_insert(0) += 1;
        }
        self.stages.push((stage, corpus.len(), by_year));
    }

    pub fn remaining(&self) -> usize {
        self.stages.last().map_or(0, |s| s.1)
    }
}

fn hosted_by_sector(author: &AuthorRecord, registry: &SectorRegistry) -> bool {
    author
        .affiliations()
        .iter()
        .any(|a| a.is_german() && registry.contains(&a.institution))
}

fn sector_roles(p: &Publication, registry: &SectorRegistry) -> bool {
    hosted_by_sector(p.first_author(), registry) && p.reprint_authors().any(|a| hosted_by_sector(a, registry))
}

/// Apply every enabled predicate, recording the surviving count after each.
pub fn filter_corpus_audited(
    corpus: &[Publication],
    filter: &CorpusFilter,
    list: &GoldOaIssnList,
    registry: &SectorRegistry,
) -> (Vec<Publication>, FilterAudit) {
    let mut audit = FilterAudit::default();
    let mut kept: Vec<&Publication> = corpus.iter().collect();
    audit.record(FilterStage::Input, &kept);

    let mut stage = |stage: FilterStage, kept: &mut Vec<&Publication>, keep: &dyn Fn(&Publication) -> bool| {
        kept.retain(|p| keep(p));
        audit.record(stage, kept);
    };

    if let Some((lo, hi)) = filter.year_range {
        stage(FilterStage::Year, &mut kept, &|p| (lo..=hi).contains(&p.year));
    }
    if filter.require_included_doctype {
        stage(FilterStage::DocumentType, &mut kept, &is_included_document);
    }
    if filter.require_gold_oa {
        stage(FilterStage::GoldOa, &mut kept, &|p| is_gold_oa(p, list));
    }
    if let Some(types) = &filter.coop_types {
        stage(FilterStage::Cooperation, &mut kept, &|p| {
            types.contains(&classify_cooperation(p, registry))
        });
    }
    if filter.require_sector_first_and_reprint {
        stage(FilterStage::SectorRoles, &mut kept, &|p| sector_roles(p, registry));
    }
    (kept.into_iter().cloned().collect(), audit)
}

pub fn filter_corpus(
    corpus: &[Publication],
    filter: &CorpusFilter,
    list: &GoldOaIssnList,
    registry: &SectorRegistry,
) -> Vec<Publication> {
    filter_corpus_audited(corpus, filter, list, registry).0
}
