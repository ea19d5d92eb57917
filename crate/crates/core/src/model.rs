//! Domain types shared by attribution, ingest and analytics.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::ModelError;

/// Disambiguated institution key. Equality is exact string equality.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct InstitutionId(String);

impl InstitutionId {
    pub fn new(id: impl Into<String>) -> Result<Self, ModelError> {
        let id = id.into();
        if id.is_empty() {
            return Err(ModelError::EmptyInstitutionId);
        }
        Ok(Self(id))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl TryFrom<String> for InstitutionId {
    type Error = ModelError;
    fn try_from(value: String) -> Result<Self, Self::Error> {
        Self::new(value)
    }
}

impl From<InstitutionId> for String {
    fn from(value: InstitutionId) -> Self {
        value.0
    }
}

impl fmt::Display for InstitutionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// ISO 3166-1 alpha-2 country code, stored uppercase.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Country([u8; 2]);

impl Country {
    pub const GERMANY: Country = Country(*b"DE");

    pub fn new(code: &str) -> Result<Self, ModelError> {
        let bytes = code.as_bytes();
        if bytes.len() != 2 || !bytes.iter().all(|b| b.is_ascii_uppercase()) {
            return Err(ModelError::InvalidCountry(code.to_string()));
        }
        Ok(Self([bytes[0], bytes[1]]))
    }

    pub fn is_germany(self) -> bool {
        self == Self::GERMANY
    }

    pub fn as_str(&self) -> &str {
        // constructed from ASCII uppercase only
        std::str::from_utf8(&self.0).expect("ascii country code")
    }
}

impl fmt::Display for Country {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affiliation {
    pub institution: InstitutionId,
    pub country: Country,
}

impl Affiliation {
    pub fn new(institution: &str, country: &str) -> Result<Self, ModelError> {
        Ok(Self {
            institution: InstitutionId::new(institution)?,
            country: Country::new(country)?,
        })
    }

    pub fn is_german(&self) -> bool {
        self.country.is_germany()
    }
}

/// One byline entry. Affiliations are kept in input order with duplicates removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorRecord {
    pub position: u32,
    pub is_reprint: bool,
    affiliations: Vec<Affiliation>,
}

impl AuthorRecord {
    /// Builds an author, dropping repeated institutions (first occurrence wins).
    pub fn new(position: u32, is_reprint: bool, affiliations: Vec<Affiliation>) -> Result<Self, ModelError> {
        if position == 0 {
            return Err(ModelError::ZeroPosition);
        }
        let mut seen = BTreeSet::new();
        let affiliations: Vec<Affiliation> = affiliations
            .into_iter()
            .filter(|a| seen.insert(a.institution.clone()))
            .collect();
        if affiliations.is_empty() {
            return Err(ModelError::NoAffiliations { position });
        }
        Ok(Self {
            position,
            is_reprint,
            affiliations,
        })
    }

    pub fn affiliations(&self) -> &[Affiliation] {
        &self.affiliations
    }

    pub fn institutions(&self) -> impl Iterator<Item = &InstitutionId> {
        self.affiliations.iter().map(|a| &a.institution)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publication {
    pub id: String,
    pub year: i32,
    pub doc_types: BTreeSet<String>,
    pub issns: BTreeSet<String>,
    authors: Vec<AuthorRecord>,
}

impl Publication {
    /// Validates author positions (unique, contiguous from 1), at least one
    /// author and at least one document type.
    pub fn new(
        id: impl Into<String>,
        year: i32,
        doc_types: BTreeSet<String>,
        issns: BTreeSet<String>,
        authors: Vec<AuthorRecord>,
    ) -> Result<Self, ModelError> {
        let id = id.into();
        if id.is_empty() {
            return Err(ModelError::EmptyPublicationId);
        }
        if authors.is_empty() {
            return Err(ModelError::NoAuthors);
        }
        if doc_types.is_empty() {
            return Err(ModelError::NoDocTypes);
        }
        let mut positions: Vec<u32> = authors.iter().map(|a| a.position).collect();
        positions.sort_unstable();
        for (expected, got) in (1u32..).zip(&positions) {
            if expected != *got {
                return Err(ModelError::BadPositions(positions.clone()));
            }
        }
        Ok(Self {
            id,
            year,
            doc_types,
            issns,
            authors,
        })
    }

    pub fn authors(&self) -> &[AuthorRecord] {
        &self.authors
    }

    pub fn author_count(&self) -> usize {
        self.authors.len()
    }

    /// The author at byline position 1.
    pub fn first_author(&self) -> &AuthorRecord {
        self.authors
            .iter()
            .find(|a| a.position == 1)
            .expect("validated: position 1 exists")
    }

    pub fn reprint_authors(&self) -> impl Iterator<Item = &AuthorRecord> {
        self.authors.iter().filter(|a| a.is_reprint)
    }

    /// Every (institution, country) pair appearing on the byline, deduplicated.
    pub fn affiliations(&self) -> impl Iterator<Item = &Affiliation> {
        self.authors.iter().flat_map(|a| a.affiliations.iter())
    }

    pub fn institutions(&self) -> BTreeSet<&InstitutionId> {
        self.authors.iter().flat_map(|a| a.institutions()).collect()
    }
}

/// The five pillars of the German public research system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Sector {
    Univ,
    Mpg,
    Hgf,
    Wgl,
    Fhg,
}

impl Sector {
    pub const ALL: [Sector; 5] = [Sector::Univ, Sector::Mpg, Sector::Hgf, Sector::Wgl, Sector::Fhg];

    pub fn code(self) -> &'static str {
        match self {
            Sector::Univ => "UNIV",
            Sector::Mpg => "MPG",
            Sector::Hgf => "HGF",
            Sector::Wgl => "WGL",
            Sector::Fhg => "FHG",
        }
    }
}

impl fmt::Display for Sector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for Sector {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "UNIV" => Ok(Sector::Univ),
            "MPG" => Ok(Sector::Mpg),
            "HGF" => Ok(Sector::Hgf),
            "WGL" => Ok(Sector::Wgl),
            "FHG" => Ok(Sector::Fhg),
            _ => Err(ModelError::UnknownSector(s.to_string())),
        }
    }
}

/// Institutions of the selected sectors. An institution may belong to several.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SectorRegistry {
    members: BTreeMap<InstitutionId, BTreeSet<Sector>>,
}

impl SectorRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `sectors` to the institution's membership. Empty sets are ignored.
    pub fn insert(&mut self, id: InstitutionId, sectors: impl IntoIterator<Item = Sector>) {
        let sectors: BTreeSet<Sector> = sectors.into_iter().collect();
        if sectors.is_empty() {
            return;
        }
        self.members.entry(id).or_default().extend(sectors);
    }

    pub fn contains(&self, id: &InstitutionId) -> bool {
        self.members.contains_key(id)
    }

    pub fn sectors(&self, id: &InstitutionId) -> Option<&BTreeSet<Sector>> {
        self.members.get(id)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&InstitutionId, &BTreeSet<Sector>)> {
        self.members.iter()
    }
}

impl FromIterator<(InstitutionId, Sector)> for SectorRegistry {
    fn from_iter<T: IntoIterator<Item = (InstitutionId, Sector)>>(iter: T) -> Self {
        let mut reg = SectorRegistry::new();
        for (id, s) in iter {
            reg.insert(id, [s]);
        }
        reg
    }
}

/// Cost-sharing model. Declaration order is the tie-break order 1, 2, 3, 4a, 4b.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CostModel {
    FirstAuthor,
    ReprintAuthor,
    EqualShares,
    FractionalByAuthorInstitutionPair,
    FractionalByAuthor,
}

impl CostModel {
    pub const ALL: [CostModel; 5] = [
        CostModel::FirstAuthor,
        CostModel::ReprintAuthor,
        CostModel::EqualShares,
        CostModel::FractionalByAuthorInstitutionPair,
        CostModel::FractionalByAuthor,
    ];

    /// Model number: `1`, `2`, `3`, `4a`, `4b`.
    pub fn number(self) -> &'static str {
        match self {
            CostModel::FirstAuthor => "1",
            CostModel::ReprintAuthor => "2",
            CostModel::EqualShares => "3",
            CostModel::FractionalByAuthorInstitutionPair => "4a",
            CostModel::FractionalByAuthor => "4b",
        }
    }

    /// Short name used on the command line and in file names.
    pub fn slug(self) -> &'static str {
        match self {
            CostModel::FirstAuthor => "first",
            CostModel::ReprintAuthor => "reprint",
            CostModel::EqualShares => "equal",
            CostModel::FractionalByAuthorInstitutionPair => "frac-pairs",
            CostModel::FractionalByAuthor => "frac-authors",
        }
    }
}

impl fmt::Display for CostModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for CostModel {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        CostModel::ALL
            .into_iter()
            .find(|m| m.slug() == key || m.number() == key)
            .ok_or_else(|| ModelError::UnknownModel(s.to_string()))
    }
}

/// Co-operation constellation of a publication.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CooperationType {
    K0,
    KNSec,
    KN,
    KI,
    KISec,
    OutOfScope,
}

impl CooperationType {
    pub const ALL: [CooperationType; 6] = [
        CooperationType::K0,
        CooperationType::KNSec,
        CooperationType::KN,
        CooperationType::KI,
        CooperationType::KISec,
        CooperationType::OutOfScope,
    ];

    pub fn code(self) -> &'static str {
        match self {
            CooperationType::K0 => "K0",
            CooperationType::KNSec => "KNSec",
            CooperationType::KN => "KN",
            CooperationType::KI => "KI",
            CooperationType::KISec => "KISec",
            CooperationType::OutOfScope => "OutOfScope",
        }
    }
}

impl fmt::Display for CooperationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for CooperationType {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        CooperationType::ALL
            .into_iter()
            .find(|c| c.code().to_ascii_lowercase() == key)
            .ok_or_else(|| ModelError::UnknownCooperationType(s.to_string()))
    }
}

/// Which affiliated institutions bear cost.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub enum ParticipantScope {
    AllInstitutions,
    GermanOnly,
    #[default]
    SectorOnly,
}

impl ParticipantScope {
    pub const ALL: [ParticipantScope; 3] = [
        ParticipantScope::AllInstitutions,
        ParticipantScope::GermanOnly,
        ParticipantScope::SectorOnly,
    ];

    pub fn slug(self) -> &'static str {
        match self {
            ParticipantScope::AllInstitutions => "all",
            ParticipantScope::GermanOnly => "german",
            ParticipantScope::SectorOnly => "sector",
        }
    }
}

impl fmt::Display for ParticipantScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.slug())
    }
}

impl FromStr for ParticipantScope {
    type Err = ModelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        ParticipantScope::ALL
            .into_iter()
            .find(|p| p.slug() == key)
            .ok_or_else(|| ModelError::UnknownScope(s.to_string()))
    }
}
