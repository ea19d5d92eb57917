//! Invariants of the attribution models and the aggregates built on them.

use std::collections::{BTreeMap, BTreeSet};

use apc_share::analytics::{compute_publication_units, pairwise_model_comparison, range_report, sector_totals};
use apc_share::attribution::{attribute_with, participants};
use apc_share::model::{Affiliation, AuthorRecord};
use apc_share::{
    classify_cooperation, CostModel, InstitutionId, ParticipantScope, Publication, Sector, SectorRegistry,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

const SECTOR_POOL: [&str; 6] = ["S1", "S2", "S3", "S4", "S5", "S6"];
const GERMAN_POOL: [&str; 3] = ["N1", "N2", "N3"];
const FOREIGN_POOL: [(&str, &str); 3] = [("F1", "US"), ("F2", "FR"), ("F3", "JP")];

fn registry() -> SectorRegistry {
    let mut r = SectorRegistry::new();
    for (i, s) in SECTOR_POOL.iter().enumerate() {
        let sectors = match i {
            0 | 1 => vec![Sector::Univ],
            2 => vec![Sector::Mpg],
            3 => vec![Sector::Hgf, Sector::Mpg],
            4 => vec![Sector::Wgl],
            _ => vec![Sector::Fhg],
        };
        r.insert(InstitutionId::new(*s).unwrap(), sectors);
    }
    r
}

fn institution() -> impl Strategy<Value = (&'static str, &'static str)> {
    prop_oneof![
        4 => proptest::sample::select(SECTOR_POOL.to_vec()).prop_map(|s| (s, "DE")),
        1 => proptest::sample::select(GERMAN_POOL.to_vec()).prop_map(|s| (s, "DE")),
        1 => proptest::sample::select(FOREIGN_POOL.to_vec()),
    ]
}

fn publication(max_authors: usize) -> impl Strategy<Value = Publication> {
    let author = (any::<bool>(), prop::collection::vec(institution(), 1..=4));
    prop::collection::vec(author, 1..=max_authors).prop_map(|authors| {
        let authors = authors
            .into_iter()
            .enumerate()
            .map(|(i, (rp, affs))| {
                let affs = affs
                    .into_iter()
                    .map(|(inst, c)| Affiliation::new(inst, c).unwrap())
                    .collect();
                AuthorRecord::new(i as u32 + 1, rp, affs).unwrap()
            })
            .collect();
        Publication::new("p", 2016, ["Article".to_string()].into(), Default::default(), authors).unwrap()
    })
}

fn scope() -> impl Strategy<Value = ParticipantScope> {
    proptest::sample::select(ParticipantScope::ALL.to_vec())
}

fn one() -> BigRational {
    BigRational::one()
}

fn frac(n: usize, d: usize) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Brute-force pair counting: enumerate (author, institution) pairs explicitly.
fn pair_oracle(p: &Publication, parts: &BTreeSet<InstitutionId>) -> BTreeMap<InstitutionId, BigRational> {
    let mut pairs: Vec<(u32, InstitutionId)> = Vec::new();
    for a in p.authors() {
        for aff in a.affiliations() {
            if parts.contains(&aff.institution) {
                pairs.push((a.position, aff.institution.clone()));
            }
        }
    }
    let mut counts: BTreeMap<InstitutionId, usize> = BTreeMap::new();
    for (_, inst) in &pairs {
        *counts.entry(inst.clone()).or_default() += 1;
    }
    counts.into_iter().map(|(k, n)| (k, frac(n, pairs.len()))).collect()
}

/// Per-author weight splitting over all institutions, unrestricted scope.
fn author_weight_oracle(p: &Publication) -> BTreeMap<InstitutionId, BigRational> {
    let mut out: BTreeMap<InstitutionId, BigRational> = BTreeMap::new();
    let n = p.authors().len();
    for a in p.authors() {
        let k = a.affiliations().len();
        for aff in a.affiliations() {
            *out.entry(aff.institution.clone()).or_insert_with(BigRational::zero) += frac(1, n * k);
        }
    }
    out
}

fn as_map(v: &apc_share::ShareVector) -> BTreeMap<InstitutionId, BigRational> {
    v.iter().map(|(k, s)| (k.clone(), s.clone())).collect()
}

fn permuted(p: &Publication, order: &[usize]) -> Publication {
    // `order` is a permutation of author indices; position numbers follow the new order
    let authors = order
        .iter()
        .enumerate()
        .map(|(new_pos, &old)| {
            let a = &p.authors()[old];
            AuthorRecord::new(new_pos as u32 + 1, a.is_reprint, a.affiliations().to_vec()).unwrap()
        })
        .collect();
    Publication::new(p.id.clone(), p.year, p.doc_types.clone(), p.issns.clone(), authors).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn shares_sum_to_one_and_are_bounded(p in publication(12), scope in scope()) {
        let parts = participants(&p, &registry(), scope);
        for m in CostModel::ALL {
            if let Ok(v) = attribute_with(&p, m, &parts) {
                prop_assert_eq!(v.total(), one());
                for (id, s) in v.iter() {
                    prop_assert!(*s > BigRational::zero() && *s <= one());
                    prop_assert!(parts.contains(id));
                }
            }
        }
    }

    #[test]
    fn pair_model_matches_enumeration(p in publication(8), scope in scope()) {
        let parts = participants(&p, &registry(), scope);
        let oracle = pair_oracle(&p, &parts);
        match attribute_with(&p, CostModel::FractionalByAuthorInstitutionPair, &parts) {
            Ok(v) => prop_assert_eq!(as_map(&v), oracle),
            Err(_) => prop_assert!(oracle.is_empty()),
        }
    }

    #[test]
    fn author_model_matches_weight_splitting(p in publication(8)) {
        let parts = participants(&p, &registry(), ParticipantScope::AllInstitutions);
        let v = attribute_with(&p, CostModel::FractionalByAuthor, &parts).unwrap();
        prop_assert_eq!(as_map(&v), author_weight_oracle(&p));
    }

    #[test]
    fn role_models_pay_only_role_holders(p in publication(10), scope in scope()) {
        let parts = participants(&p, &registry(), scope);
        if let Ok(v) = attribute_with(&p, CostModel::FirstAuthor, &parts) {
            let first: BTreeSet<_> = p.first_author().institutions().collect();
            prop_assert!(v.iter().all(|(id, _)| first.contains(id)));
        }
        if let Ok(v) = attribute_with(&p, CostModel::ReprintAuthor, &parts) {
            let rp: BTreeSet<_> = p.reprint_authors().flat_map(|a| a.institutions()).collect();
            prop_assert!(v.iter().all(|(id, _)| rp.contains(id)));
        }
    }

    #[test]
    fn fractional_models_ignore_author_order(p in publication(8), seed in any::<u64>(), scope in scope()) {
        use rand::{seq::SliceRandom, SeedableRng};
        let mut order: Vec<usize> = (0..p.authors().len()).collect();
        order.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        let q = permuted(&p, &order);
        let reg = registry();
        let (pp, qp) = (participants(&p, &reg, scope), participants(&q, &reg, scope));
        for m in [CostModel::EqualShares, CostModel::FractionalByAuthorInstitutionPair, CostModel::FractionalByAuthor] {
            prop_assert_eq!(attribute_with(&p, m, &pp).ok(), attribute_with(&q, m, &qp).ok());
        }
        // models 1 and 2 only care about who holds the role
        let mut tail: Vec<usize> = (1..p.authors().len()).collect();
        tail.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 1));
        let keep_first: Vec<usize> = std::iter::once(0).chain(tail).collect();
        let r = permuted(&p, &keep_first);
        let rp = participants(&r, &reg, scope);
        prop_assert_eq!(attribute_with(&p, CostModel::FirstAuthor, &pp).ok(), attribute_with(&r, CostModel::FirstAuthor, &rp).ok());
        prop_assert_eq!(attribute_with(&p, CostModel::ReprintAuthor, &pp).ok(), attribute_with(&q, CostModel::ReprintAuthor, &qp).ok());
    }

    #[test]
    fn narrowing_participants_never_lowers_a_remaining_share(p in publication(10), drop_mask in any::<u16>()) {
        let all = participants(&p, &registry(), ParticipantScope::AllInstitutions);
        let narrowed: BTreeSet<InstitutionId> = all
            .iter()
            .enumerate()
            .filter(|(i, _)| drop_mask & (1 << (i % 16)) == 0)
            .map(|(_, id)| id.clone())
            .collect();
        for m in [CostModel::EqualShares, CostModel::FractionalByAuthorInstitutionPair, CostModel::FractionalByAuthor] {
            let wide = attribute_with(&p, m, &all).unwrap();
            if let Ok(small) = attribute_with(&p, m, &narrowed) {
                for (id, s) in small.iter() {
                    prop_assert!(*s >= wide.share_of(id));
                }
            }
        }
    }

    #[test]
    fn classifier_is_total(p in publication(10)) {
        // exactly one variant; the match in the classifier is exhaustive, so check consistency instead
        let t = classify_cooperation(&p, &registry());
        let foreign = p.affiliations().any(|a| !a.is_german());
        match t {
            apc_share::CooperationType::KI | apc_share::CooperationType::KISec => prop_assert!(foreign),
            apc_share::CooperationType::K0 | apc_share::CooperationType::KN | apc_share::CooperationType::KNSec => prop_assert!(!foreign),
            apc_share::CooperationType::OutOfScope => {}
        }
    }

    #[test]
    fn aggregates_conserve_mass(corpus in prop::collection::vec(publication(6), 0..25), scope in scope()) {
        let corpus: Vec<Publication> = corpus
            .into_iter()
            .enumerate()
            .map(|(i, mut p)| { p.id = format!("p{i}"); p })
            .collect();
        let reg = registry();
        let t = compute_publication_units(&corpus, &CostModel::ALL.into(), &reg, scope);
        prop_assert_eq!(t.attributed + t.excluded.len(), corpus.len());
        let n = BigRational::from_integer(BigInt::from(t.attributed));
        for m in CostModel::ALL {
            prop_assert_eq!(t.column_total(m).unwrap(), n.clone());
        }
        for (id, row) in t.rows() {
            prop_assert!(row.iter().all(|v| *v >= BigRational::zero()));
            let r = range_report(&t).into_iter().find(|r| &r.institution == id).unwrap();
            prop_assert_eq!(&r.pu_diff, &(&r.pu_max - &r.pu_min));
            let rounded: Vec<BigRational> = row.iter().map(|v| apc_share::numeric::round_half_up(v, 2)).collect();
            prop_assert!(rounded.iter().all(|v| r.pu_min <= *v && *v <= r.pu_max));
        }
        let a = pairwise_model_comparison(&t, CostModel::EqualShares, CostModel::ReprintAuthor).unwrap();
        let b = pairwise_model_comparison(&t, CostModel::ReprintAuthor, CostModel::EqualShares).unwrap();
        let b: BTreeMap<_, _> = b.diffs.into_iter().collect();
        for (id, d) in &a.diffs {
            prop_assert_eq!(&-d.clone(), &b[id]);
        }
        let sectors = sector_totals(&t, &reg);
        if scope == ParticipantScope::SectorOnly {
            for (col, m) in t.models().iter().enumerate() {
                let sum: BigRational = sectors.rows.iter().map(|r| r.totals[col].clone()).sum();
                prop_assert!(sum >= t.column_total(*m).unwrap());
            }
        }
    }
}

#[cfg(feature = "parallel")]
proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn parallel_and_sequential_agree(corpus in prop::collection::vec(publication(6), 0..40), scope in scope()) {
        use apc_share::analytics::{compute_publication_units_parallel, compute_publication_units_sequential};
        let corpus: Vec<Publication> = corpus
            .into_iter()
            .enumerate()
            .map(|(i, mut p)| { p.id = format!("p{i}"); p })
            .collect();
        let reg = registry();
        let models: BTreeSet<CostModel> = CostModel::ALL.into();
        prop_assert_eq!(
            compute_publication_units_sequential(&corpus, &models, &reg, scope),
            compute_publication_units_parallel(&corpus, &models, &reg, scope)
        );
    }
}
