//! Co-operation type of a publication.

use std::collections::BTreeSet;

use crate::model::{CooperationType, Publication, SectorRegistry};

/// Classify by the German institutions present, how many of them belong to
/// the selected sectors, and whether any foreign affiliation appears.
///
/// Publications without any selected-sector institution are `OutOfScope`.
pub fn classify_cooperation(publication: &Publication, registry: &SectorRegistry) -> CooperationType {
    let mut german = BTreeSet::new();
    let mut foreign = false;
    for affiliation in publication.affiliations() {
        if affiliation.is_german() {
            german.insert(&affiliation.institution);
        } else {
            foreign = true;
        }
    }
    let sector = german.iter().filter(|id| registry.contains(id)).count();

    match (foreign, sector, german.len()) {
        (_, 0, _) => CooperationType::OutOfScope,
        (false, 1, 1) => CooperationType::K0,
        (false, 1, _) => CooperationType::KN,
        (false, _, _) => CooperationType::KNSec,
        (true, 1, _) => CooperationType::KI,
        (true, _, _) => CooperationType::KISec,
    }
}
