//! The five cost-sharing models.
//!
//! Every model first determines raw, non-negative weights for the
//! participating institutions and then scales them so they sum to exactly
//! one. For models 1, 2 and 3 the weights are equal; 4a counts
//! author-institution pairs; 4b gives each author `1/#authors`, divided
//! equally over all of that author's institutions, and keeps only the
//! participant portions.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::AttributionError;
use crate::model::{CostModel, InstitutionId, ParticipantScope, Publication, SectorRegistry};

/// Exact cost share of one institution, in `(0, 1]`.
pub type Share = BigRational;

/// Shares of one publication under one model. Non-empty vectors sum to exactly 1;
/// zero shares are never stored.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ShareVector {
    entries: BTreeMap<InstitutionId, Share>,
}

impl ShareVector {
    /// Scale non-negative weights to sum to one, dropping zeros.
    /// Returns `None` when every weight is zero.
    fn from_weights(weights: BTreeMap<InstitutionId, BigRational>) -> Option<Self> {
        let total: BigRational = weights.values().sum();
        if total.is_zero() {
            return None;
        }
        let entries = weights
            .into_iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(id, w)| (id, w / &total))
            .collect();
        Some(Self { entries })
    }

    pub fn get(&self, id: &InstitutionId) -> Option<&Share> {
        self.entries.get(id)
    }

    /// Share of `id`, zero when absent.
    pub fn share_of(&self, id: &InstitutionId) -> Share {
        self.entries.get(id).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&InstitutionId, &Share)> {
        self.entries.iter()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> BigRational {
        self.entries.values().sum()
    }

    pub fn into_inner(self) -> BTreeMap<InstitutionId, Share> {
        self.entries
    }
}

/// Institutions that bear cost for `publication` under `scope`.
pub fn participants(
    publication: &Publication,
    registry: &SectorRegistry,
    scope: ParticipantScope,
) -> BTreeSet<InstitutionId> {
    publication
        .affiliations()
        .filter(|a| match scope {
            ParticipantScope::AllInstitutions => true,
            ParticipantScope::GermanOnly => a.is_german(),
            ParticipantScope::SectorOnly => a.is_german() && registry.contains(&a.institution),
        })
        .map(|a| a.institution.clone())
        .collect()
}

fn no_payer(publication: &Publication, model: CostModel) -> AttributionError {
    AttributionError::NoEligiblePayer {
        publication: publication.id.clone(),
        model,
    }
}

fn equal_weights<'a>(ids: impl IntoIterator<Item = &'a InstitutionId>) -> BTreeMap<InstitutionId, BigRational> {
    ids.into_iter().map(|id| (id.clone(), BigRational::one())).collect()
}

/// Model 1: the first author's participating institutions split the cost equally.
pub fn shares_first_author(
    publication: &Publication,
    participants: &BTreeSet<InstitutionId>,
) -> Result<ShareVector, AttributionError> {
    let payers = publication
        .first_author()
        .institutions()
        .filter(|id| participants.contains(*id));
    ShareVector::from_weights(equal_weights(payers)).ok_or_else(|| no_payer(publication, CostModel::FirstAuthor))
}

/// Model 2: each distinct participating institution hosting at least one
/// reprint author receives an equal part.
pub fn shares_reprint_author(
    publication: &Publication,
    participants: &BTreeSet<InstitutionId>,
) -> Result<ShareVector, AttributionError> {
    let payers: BTreeSet<&InstitutionId> = publication
        .reprint_authors()
        .flat_map(|a| a.institutions())
        .filter(|id| participants.contains(*id))
        .collect();
    ShareVector::from_weights(equal_weights(payers)).ok_or_else(|| no_payer(publication, CostModel::ReprintAuthor))
}

/// Model 3: `1/|participants|` each.
pub fn shares_equal(
    publication: &Publication,
    participants: &BTreeSet<InstitutionId>,
) -> Result<ShareVector, AttributionError> {
    ShareVector::from_weights(equal_weights(participants)).ok_or_else(|| no_payer(publication, CostModel::EqualShares))
}

/// Model 4a: share proportional to the number of author-institution pairs.
/// Pairs naming a non-participant are left out of numerator and denominator.
pub fn shares_by_author_institution_pairs(
    publication: &Publication,
    participants: &BTreeSet<InstitutionId>,
) -> Result<ShareVector, AttributionError> {
    let mut weights: BTreeMap<InstitutionId, BigRational> = BTreeMap::new();
    for id in publication.authors().iter().flat_map(|a| a.institutions()) {
        if participants.contains(id) {
            *weights.entry(id.clone()).or_insert_with(BigRational::zero) += BigRational::one();
        }
    }
    ShareVector::from_weights(weights)
        .ok_or_else(|| no_payer(publication, CostModel::FractionalByAuthorInstitutionPair))
}

/// Model 4b: each author carries `1/#authors`, split equally over all of the
/// author's institutions. Only participant portions are kept and the result
/// is rescaled to sum to one.
pub fn shares_by_fractional_authorship(
    publication: &Publication,
    participants: &BTreeSet<InstitutionId>,
) -> Result<ShareVector, AttributionError> {
    let n_authors = BigInt::from(publication.author_count());
    let mut weights: BTreeMap<InstitutionId, BigRational> = BTreeMap::new();
    for author in publication.authors() {
        let n_insts = BigInt::from(author.affiliations().len());
        let portion = BigRational::new(BigInt::one(), &n_authors * n_insts);
        for id in author.institutions().filter(|id| participants.contains(*id)) {
            *weights.entry(id.clone()).or_insert_with(BigRational::zero) += &portion;
        }
    }
    ShareVector::from_weights(weights).ok_or_else(|| no_payer(publication, CostModel::FractionalByAuthor))
}

/// Shares of `publication` under `model`, with participants chosen by `scope`.
pub fn attribute(
    publication: &Publication,
    model: CostModel,
    registry: &SectorRegistry,
    scope: ParticipantScope,
) -> Result<ShareVector, AttributionError> {
    let participants = participants(publication, registry, scope);
    attribute_with(publication, model, &participants)
}

/// Like [`attribute`] but with a precomputed participant set.
pub fn attribute_with(
    publication: &Publication,
    model: CostModel,
    participants: &BTreeSet<InstitutionId>,
) -> Result<ShareVector, AttributionError> {
    match model {
        CostModel::FirstAuthor => shares_first_author(publication, participants),
        CostModel::ReprintAuthor => shares_reprint_author(publication, participants),
        CostModel::EqualShares => shares_equal(publication, participants),
        CostModel::FractionalByAuthorInstitutionPair => shares_by_author_institution_pairs(publication, participants),
        CostModel::FractionalByAuthor => shares_by_fractional_authorship(publication, participants),
    }
}
