//! Corpus profiles: role shares, co-operation mix, author counts.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::cooperation::classify_cooperation;
use crate::model::{AuthorRecord, CooperationType, InstitutionId, Publication, Sector, SectorRegistry};
use crate::numeric::{mean, median_sorted, ratio};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AuthorRole {
    First,
    Reprint,
}

impl AuthorRole {
    pub fn slug(self) -> &'static str {
        match self {
            AuthorRole::First => "first",
            AuthorRole::Reprint => "reprint",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleShareRow {
    pub institution: InstitutionId,
    pub n_pubs: usize,
    pub n_role: usize,
    pub role_share: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoleShares {
    pub role: AuthorRole,
    pub min_pubs: usize,
    pub rows: Vec<RoleShareRow>,
    /// Unweighted mean of `role_share` over `rows`; `None` if no institution qualifies.
    pub mean: Option<BigRational>,
}

/// Sector institutions (German affiliation listed in the registry) of a publication.
fn sector_institutions<'a>(p: &'a Publication, registry: &SectorRegistry) -> BTreeSet<&'a InstitutionId> {
    p.affiliations()
        .filter(|a| a.is_german() && registry.contains(&a.institution))
        .map(|a| &a.institution)
        .collect()
}

fn role_holders<'a>(p: &'a Publication, role: AuthorRole) -> Box<dyn Iterator<Item = &'a AuthorRecord> + 'a> {
    match role {
        AuthorRole::First => Box::new(std::iter::once(p.first_author())),
        AuthorRole::Reprint => Box::new(p.reprint_authors()),
    }
}

/// Share of each sector institution's publications in which a role holder
/// lists it. Only institutions with strictly more than `min_pubs` publications
/// are reported.
pub fn author_role_shares(
    corpus: &[Publication],
    registry: &SectorRegistry,
    role: AuthorRole,
    min_pubs: usize,
) -> RoleShares {
    let mut counts: BTreeMap<&InstitutionId, (usize, usize)> = BTreeMap::new();
    for p in corpus {
        let hosts: BTreeSet<&InstitutionId> = role_holders(p, role).flat_map(|a| a.institutions()).collect();
        for inst in sector_institutions(p, registry) {
            let c = counts.entry(inst).or_default();
            c.0 += 1;
            if hosts.contains(inst) {
                c.1 += 1;
            }
        }
    }
    let rows: Vec<RoleShareRow> = counts
        .into_iter()
        .filter(|(_, (n, _))| *n > min_pubs)
        .map(|(id, (n, k))| RoleShareRow {
            institution: id.clone(),
            n_pubs: n,
            n_role: k,
            role_share: ratio(k as i64, n as i64),
        })
        .collect();
    let shares: Vec<BigRational> = rows.iter().map(|r| r.role_share.clone()).collect();
    RoleShares {
        role,
        min_pubs,
        mean: mean(&shares),
        rows,
    }
}

/// Counts per co-operation type over some set of publications.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoopBreakdown {
    pub total: usize,
    /// Only types that occur.
    pub counts: BTreeMap<CooperationType, usize>,
}

impl CoopBreakdown {
    fn add(&mut self, t: CooperationType) {
        self.total += 1;
        *self.counts.entry(t).or_insert(0) += 1;
    }

    /// Exact percentage of `t`; zero if absent.
    pub fn percentage(&self, t: CooperationType) -> BigRational {
        let n = self.counts.get(&t).copied().unwrap_or(0);
        if self.total == 0 {
            return ratio(0, 1);
        }
        ratio(100 * n as i64, self.total as i64)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CoopDistribution {
    pub overall: CoopBreakdown,
    /// A publication counts for every sector with at least one of its institutions.
    pub per_sector: BTreeMap<Sector, CoopBreakdown>,
}

fn sectors_of(p: &Publication, registry: &SectorRegistry) -> BTreeSet<Sector> {
    sector_institutions(p, registry)
        .into_iter()
        .filter_map(|id| registry.sectors(id))
        .flatten()
        .copied()
        .collect()
}

pub fn cooperation_distribution(corpus: &[Publication], registry: &SectorRegistry) -> CoopDistribution {
    let mut dist = CoopDistribution::default();
    for p in corpus {
        let t = classify_cooperation(p, registry);
        dist.overall.add(t);
        for s in sectors_of(p, registry) {
            dist.per_sector.entry(s).or_default().add(t);
        }
    }
    dist
}

/// Five-number summary. Quartiles use the exclusive median-of-halves rule:
/// for odd counts the median is left out of both halves.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxStats {
    pub n: usize,
    pub min: BigRational,
    pub q1: BigRational,
    pub median: BigRational,
    pub q3: BigRational,
    pub max: BigRational,
}

pub const QUARTILE_RULE: &str = "exclusive median-of-halves";

impl BoxStats {
    /// `None` for an empty sample.
    pub fn from_counts(values: &[usize]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted: Vec<BigRational> = values
            .iter()
            .map(|v| BigRational::from_integer(BigInt::from(*v)))
            .collect();
        sorted.sort();
        let n = sorted.len();
        let (lower, upper) = if n == 1 {
            (&sorted[..], &sorted[..])
        } else {
            (&sorted[..n / 2], &sorted[n.div_ceil(2)..])
        };
        Some(Self {
            n,
            min: sorted[0].clone(),
            q1: median_sorted(lower),
            median: median_sorted(&sorted),
            q3: median_sorted(upper),
            max: sorted[n - 1].clone(),
        })
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AuthorCountDistribution {
    /// Number of publications per exact author count.
    pub histogram: BTreeMap<usize, usize>,
    pub overall: Option<BoxStats>,
    pub per_sector: BTreeMap<Sector, BoxStats>,
}

pub fn author_count_distribution(corpus: &[Publication], registry: &SectorRegistry) -> AuthorCountDistribution {
    let mut histogram = BTreeMap::new();
    let mut all = Vec::with_capacity(corpus.len());
    let mut by_sector: BTreeMap<Sector, Vec<usize>> = BTreeMap::new();
    for p in corpus {
        let n = p.author_count();
        *histogram.entry(n).or_insert(0) += 1;
        all.push(n);
        for s in sectors_of(p, registry) {
            by_sector.entry(s).or_default().push(n);
        }
    }
    AuthorCountDistribution {
        histogram,
        overall: BoxStats::from_counts(&all),
        per_sector: by_sector
            .into_iter()
            .filter_map(|(s, v)| BoxStats::from_counts(&v).map(|b| (s, b)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Affiliation;

    fn id(s: &str) -> InstitutionId {
        InstitutionId::new(s).unwrap()
    }

    /// Authors given as (institutions, country, reprint).
    fn publication(pid: usize, authors: &[(&[&str], &str, bool)]) -> Publication {
        let authors = authors
            .iter()
            .enumerate()
            .map(|(i, (insts, c, rp))| {
                AuthorRecord::new(
                    i as u32 + 1,
                    *rp,
                    insts.iter().map(|x| Affiliation::new(x, c).unwrap()).collect(),
                )
                .unwrap()
            })
            .collect();
        Publication::new(
            format!("p{pid}"),
            2018,
            ["Article".to_string()].into(),
            Default::default(),
            authors,
        )
        .unwrap()
    }

    fn registry() -> SectorRegistry {
        let mut r = SectorRegistry::new();
        r.insert(id("X"), [Sector::Univ]);
        r.insert(id("Y"), [Sector::Univ]);
        r.insert(id("M"), [Sector::Mpg, Sector::Hgf]);
        r
    }

    #[test]
    fn first_author_share_ratio() {
        // X on 10 publications, first author at X in 7
        let corpus: Vec<Publication> = (0..10)
            .map(|i| {
                if i < 7 {
                    publication(i, &[(&["X"], "DE", true), (&["Y"], "DE", false)])
                } else {
                    publication(i, &[(&["Y"], "DE", true), (&["X"], "DE", false)])
                }
            })
            .collect();
        let shares = author_role_shares(&corpus, &registry(), AuthorRole::First, 0);
        let x = shares.rows.iter().find(|r| r.institution == id("X")).unwrap();
        assert_eq!((x.n_pubs, x.n_role), (10, 7));
        assert_eq!(x.role_share, ratio(7, 10));
        // X 0.7, Y 0.3
        assert_eq!(shares.mean, Some(ratio(1, 2)));
    }

    #[test]
    fn threshold_is_strict() {
        let corpus: Vec<Publication> = (0..50).map(|i| publication(i, &[(&["X"], "DE", true)])).collect();
        assert!(author_role_shares(&corpus, &registry(), AuthorRole::First, 50)
            .rows
            .is_empty());
        assert_eq!(
            author_role_shares(&corpus, &registry(), AuthorRole::First, 49)
                .rows
                .len(),
            1
        );
        assert_eq!(
            author_role_shares(&corpus, &registry(), AuthorRole::First, 49).rows[0].role_share,
            ratio(1, 1)
        );
    }

    #[test]
    fn reprint_role_any_holder() {
        let corpus = [publication(
            0,
            &[(&["X"], "DE", false), (&["Y"], "DE", true), (&["X"], "DE", true)],
        )];
        let shares = author_role_shares(&corpus, &registry(), AuthorRole::Reprint, 0);
        assert!(shares.rows.iter().all(|r| r.role_share == ratio(1, 1)));
        let none = author_role_shares(&[], &registry(), AuthorRole::Reprint, 0);
        assert_eq!(none.mean, None);
    }

    #[test]
    fn coop_percentages() {
        let corpus = [
            publication(0, &[(&["X"], "DE", true)]),
            publication(1, &[(&["Y"], "DE", true)]),
            publication(2, &[(&["X"], "DE", true), (&["F"], "US", false)]),
            publication(3, &[(&["X"], "DE", true), (&["Y"], "DE", false)]),
        ];
        let d = cooperation_distribution(&corpus, &registry());
        assert_eq!(d.overall.total, 4);
        assert_eq!(d.overall.percentage(CooperationType::K0), ratio(50, 1));
        assert_eq!(d.overall.percentage(CooperationType::KI), ratio(25, 1));
        assert_eq!(d.overall.percentage(CooperationType::KNSec), ratio(25, 1));
        assert_eq!(d.overall.counts.len(), 3);
    }

    #[test]
    fn multi_sector_publication_counted_in_both() {
        let d = cooperation_distribution(&[publication(0, &[(&["M"], "DE", true)])], &registry());
        assert_eq!(
            d.per_sector.keys().copied().collect::<Vec<_>>(),
            [Sector::Mpg, Sector::Hgf]
        );
        assert!(cooperation_distribution(&[], &registry()).overall.counts.is_empty());
    }

    #[test]
    fn histogram_and_degenerate_box() {
        let mk = |n: usize, pid: usize| {
            let authors: Vec<(&[&str], &str, bool)> = (0..n).map(|i| (&["X"][..], "DE", i == 0)).collect();
            publication(pid, &authors)
        };
        let corpus = [mk(1, 0), mk(3, 1), mk(3, 2), mk(5, 3)];
        let d = author_count_distribution(&corpus, &registry());
        assert_eq!(d.histogram, [(1, 1), (3, 2), (5, 1)].into());

        let single = BoxStats::from_counts(&[2]).unwrap();
        for v in [&single.min, &single.q1, &single.median, &single.q3, &single.max] {
            assert_eq!(*v, ratio(2, 1));
        }
    }

    #[test]
    fn quartiles_exclusive_halves() {
        // odd: 1 2 3 4 5 6 7 -> halves (1 2 3) (5 6 7)
        let b = BoxStats::from_counts(&[7, 1, 5, 3, 2, 6, 4]).unwrap();
        assert_eq!(
            (b.q1.clone(), b.median.clone(), b.q3.clone()),
            (ratio(2, 1), ratio(4, 1), ratio(6, 1))
        );
        // even: 1 2 3 4 5 6 -> halves (1 2 3) (4 5 6)
        let b = BoxStats::from_counts(&[1, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!((b.q1, b.median, b.q3), (ratio(2, 1), ratio(7, 2), ratio(5, 1)));
    }
}
