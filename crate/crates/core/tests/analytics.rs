//! Aggregates checked against hand enumeration on small synthetic corpora.

use std::collections::{BTreeMap, BTreeSet};

use apc_share::analytics::{
    author_count_distribution, compute_publication_units, pairwise_model_comparison, range_report, sector_totals,
    PublicationUnitsTable,
};
use apc_share::model::{Affiliation, AuthorRecord};
use apc_share::numeric::format_fixed;
use apc_share::{CostModel, InstitutionId, ParticipantScope, Publication, Sector, SectorRegistry};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

fn id(s: &str) -> InstitutionId {
    InstitutionId::new(s).unwrap()
}

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Each author is (is_reprint, institutions); every institution is German.
fn publication(pid: &str, authors: &[(bool, &[&str])]) -> Publication {
    let authors = authors
        .iter()
        .enumerate()
        .map(|(i, (rp, insts))| {
            let affs = insts.iter().map(|inst| Affiliation::new(inst, "DE").unwrap()).collect();
            AuthorRecord::new(i as u32 + 1, *rp, affs).unwrap()
        })
        .collect();
    Publication::new(pid, 2016, ["Article".to_string()].into(), BTreeSet::new(), authors).unwrap()
}

fn registry(entries: &[(&str, &[Sector])]) -> SectorRegistry {
    let mut reg = SectorRegistry::new();
    for (inst, sectors) in entries {
        reg.insert(id(inst), sectors.iter().copied());
    }
    reg
}

fn table(corpus: &[Publication], reg: &SectorRegistry) -> PublicationUnitsTable {
    compute_publication_units(corpus, &CostModel::ALL.into(), reg, ParticipantScope::SectorOnly)
}

#[test]
fn worked_example_equal_minus_reprint() {
    let p = publication(
        "t5",
        &[
            (true, &["I1"]),
            (false, &["I2", "I3"]),
            (false, &["I4"]),
            (false, &["I4"]),
            (false, &["I4"]),
        ],
    );
    let reg = registry(&[
        ("I1", &[Sector::Univ]),
        ("I2", &[Sector::Univ]),
        ("I3", &[Sector::Mpg]),
        ("I4", &[Sector::Hgf]),
    ]);
    let t = table(&[p], &reg);
    let cmp = pairwise_model_comparison(&t, CostModel::EqualShares, CostModel::ReprintAuthor).unwrap();
    let got: BTreeMap<_, _> = cmp.diffs.into_iter().collect();
    let want: BTreeMap<_, _> = [("I1", r(-3, 4)), ("I2", r(1, 4)), ("I3", r(1, 4)), ("I4", r(1, 4))]
        .map(|(i, v)| (id(i), v))
        .into();
    assert_eq!(got, want);
}

#[test]
fn three_publication_pairwise_matches_column_subtraction() {
    let corpus = [
        publication("a", &[(true, &["X"]), (false, &["Y"])]),
        publication("b", &[(false, &["Y"]), (true, &["Z"]), (false, &["Z"])]),
        publication("c", &[(true, &["X", "Z"])]),
    ];
    let reg = registry(&[("X", &[Sector::Univ]), ("Y", &[Sector::Univ]), ("Z", &[Sector::Mpg])]);
    let t = table(&corpus, &reg);
    // equal shares: a {X 1/2, Y 1/2}, b {Y 1/2, Z 1/2}, c {X 1/2, Z 1/2}
    // first author: a {X}, b {Y}, c {X 1/2, Z 1/2}
    let equal = [("X", r(1, 1)), ("Y", r(1, 1)), ("Z", r(1, 1))];
    let first = [("X", r(3, 2)), ("Y", r(1, 1)), ("Z", r(1, 2))];
    let cmp = pairwise_model_comparison(&t, CostModel::EqualShares, CostModel::FirstAuthor).unwrap();
    let mut want: Vec<(InstitutionId, BigRational)> = equal
        .iter()
        .zip(&first)
        .map(|((i, e), (_, f))| (id(i), e - f))
        .collect();
    // descending |diff|, then id
    want.sort_by(|(ia, a), (ib, b)| b.abs().cmp(&a.abs()).then(ia.cmp(ib)));
    assert_eq!(cmp.diffs, want);
    assert_eq!(cmp.mean, r(0, 1));
    assert_eq!(cmp.median, r(0, 1));
    assert_eq!(cmp.max_abs, r(1, 2));
    let back = pairwise_model_comparison(&t, CostModel::FirstAuthor, CostModel::EqualShares).unwrap();
    assert_eq!(back.mean, -cmp.mean.clone());
}

#[test]
fn two_sector_totals_match_enumeration() {
    let corpus = [
        publication("a", &[(true, &["U1"]), (false, &["M1"])]),
        publication("b", &[(true, &["M1"]), (false, &["UM"])]),
        publication("c", &[(true, &["UM"])]),
    ];
    let reg = registry(&[
        ("U1", &[Sector::Univ]),
        ("M1", &[Sector::Mpg]),
        ("UM", &[Sector::Univ, Sector::Mpg]),
    ]);
    let t = table(&corpus, &reg);
    let totals = sector_totals(&t, &reg);
    let col = t.column(CostModel::EqualShares).unwrap();
    // equal shares: U1 1/2, M1 1/2 + 1/2, UM 1/2 + 1
    let by_sector: BTreeMap<Sector, BigRational> = totals
        .rows
        .iter()
        .map(|row| (row.sector, row.totals[col].clone()))
        .collect();
    assert_eq!(by_sector[&Sector::Univ], r(1, 2) + r(3, 2));
    assert_eq!(by_sector[&Sector::Mpg], r(1, 1) + r(3, 2));
    assert_eq!(by_sector.len(), 2);
    assert!(totals.unknown.is_empty());
    let sum: BigRational = by_sector.values().cloned().sum();
    assert!(sum > t.column_total(CostModel::EqualShares).unwrap());
}

#[test]
fn two_institution_range_rows() {
    let corpus = [
        publication("a", &[(true, &["P"]), (false, &["Q"]), (false, &["Q"])]),
        publication("b", &[(false, &["Q"]), (true, &["P", "Q"])]),
    ];
    let reg = registry(&[("P", &[Sector::Univ]), ("Q", &[Sector::Hgf])]);
    let t = table(&corpus, &reg);
    // per model (1, 2, 3, 4a, 4b):
    // P: a 1, 1, 1/2, 1/3, 1/3; b 0, 1/2, 1/2, 1/3, 1/4
    // Q is the complement of P in each column
    let p = [r(1, 1), r(3, 2), r(1, 1), r(2, 3), r(7, 12)];
    let q: Vec<BigRational> = p.iter().map(|v| r(2, 1) - v).collect();
    assert_eq!(t.row(&id("P")).unwrap(), &p);
    assert_eq!(t.row(&id("Q")).unwrap(), &q[..]);
    let rows = range_report(&t);
    let got: Vec<(String, String, String, String, &str, &str)> = rows
        .iter()
        .map(|row| {
            (
                row.institution.to_string(),
                format_fixed(&row.pu_min, 2),
                format_fixed(&row.pu_max, 2),
                format_fixed(&row.pu_diff, 2),
                row.model_min.number(),
                row.model_max.number(),
            )
        })
        .collect();
    let s = |v: &str| v.to_string();
    assert_eq!(
        got,
        [
            (s("P"), s("0.58"), s("1.50"), s("0.92"), "4b", "2"),
            (s("Q"), s("0.50"), s("1.42"), s("0.92"), "2", "4b"),
        ]
    );
}

fn quartile_oracle(values: &[usize]) -> [BigRational; 5] {
    fn med(v: &[usize]) -> BigRational {
        let n = v.len();
        if n % 2 == 1 {
            r(v[n / 2] as i64, 1)
        } else {
            r((v[n / 2 - 1] + v[n / 2]) as i64, 2)
        }
    }
    let mut v = values.to_vec();
    v.sort_unstable();
    let n = v.len();
    let lower = &v[..n / 2];
    let upper = &v[n - n / 2..];
    [
        r(v[0] as i64, 1),
        med(lower),
        med(&v),
        med(upper),
        r(v[n - 1] as i64, 1),
    ]
}

#[test]
fn twenty_publication_quartiles() {
    let counts = [3, 1, 7, 2, 12, 4, 4, 9, 1, 5, 6, 2, 30, 8, 3, 5, 2, 11, 4, 6];
    let corpus: Vec<Publication> = counts
        .iter()
        .enumerate()
        .map(|(i, &n)| {
            let authors: Vec<(bool, &[&str])> = (0..n).map(|k| (k == 0, &["S"][..])).collect();
            publication(&format!("p{i}"), &authors)
        })
        .collect();
    let reg = registry(&[("S", &[Sector::Wgl])]);
    let dist = author_count_distribution(&corpus, &reg);
    for (stats, sample) in [
        (dist.overall.as_ref().unwrap(), &counts[..]),
        (&dist.per_sector[&Sector::Wgl], &counts[..]),
    ] {
        let got = [&stats.min, &stats.q1, &stats.median, &stats.q3, &stats.max].map(Clone::clone);
        assert_eq!(got, quartile_oracle(sample));
        assert_eq!(stats.n, 20);
    }
    // odd count leaves the median out of both halves
    let odd = &counts[..19];
    let corpus19 = &corpus[..19];
    let d = author_count_distribution(corpus19, &reg);
    let s = d.overall.unwrap();
    assert_eq!([s.min, s.q1, s.median, s.q3, s.max], quartile_oracle(odd));
    assert_eq!(dist.histogram.values().sum::<usize>(), 20);
}
