use std::collections::BTreeSet;
use std::path::PathBuf;

use apc_share::ingest::CorpusFilter;
use apc_share::report::OutputFormat;
use apc_share::{CooperationType, CostModel, ParticipantScope};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::BigRational;

#[derive(Debug, Parser)]
#[command(
    name = "apc-share",
    version,
    about = "Attribute Gold Open Access APC costs to institutions under five cost-sharing models",
    long_about = "Attribute Gold Open Access APC costs to institutions under five cost-sharing models.\n\n\
        Without flags, the filters reproduce the reference configuration: publication years 2014-2018, \
        co-operation types K0, KN and KNSec, Gold-OA journals only, APC-eligible document types only, \
        first and reprint author at a sector institution, sector-only participants, all five models.\n\n\
        Exit codes: 0 success, 2 input or usage error, 3 empty selection, 4 no matching payment records."
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check input files and list every skipped row.
    Validate(Shared),
    /// Write the co-operation type of every publication.
    Classify(Shared),
    /// Filter the corpus and write the publication-units table.
    Attribute(Shared),
    /// Filter, attribute and write every comparative report.
    Report(Shared),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    All,
    German,
    Sector,
}

impl From<ScopeArg> for ParticipantScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::All => ParticipantScope::AllInstitutions,
            ScopeArg::German => ParticipantScope::GermanOnly,
            ScopeArg::Sector => ParticipantScope::SectorOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
    Both,
}

impl From<FormatArg> for OutputFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::Json => OutputFormat::Json,
            FormatArg::Both => OutputFormat::Both,
        }
    }
}

/// `A:B` inclusive, or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Years(pub Option<(i32, i32)>);

fn parse_years(s: &str) -> Result<Years, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(Years(None));
    }
    let (a, b) = s.split_once(':').ok_or("expected A:B, e.g. 2014:2018")?;
    let a: i32 = a.trim().parse().map_err(|_| format!("bad year {a:?}"))?;
    let b: i32 = b.trim().parse().map_err(|_| format!("bad year {b:?}"))?;
    if a > b {
        return Err(format!("{a} > {b}"));
    }
    Ok(Years(Some((a, b))))
}

/// Comma-separated co-operation types, or `all`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoopList(pub Option<BTreeSet<CooperationType>>);

fn parse_coop(s: &str) -> Result<CoopList, String> {
    if s.eq_ignore_ascii_case("all") {
        return Ok(CoopList(None));
    }
    let set = s
        .split(',')
        .map(|t| t.parse::<CooperationType>().map_err(|e| e.to_string()))
        .collect::<Result<BTreeSet<_>, _>>()?;
    Ok(CoopList(Some(set)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelList(pub BTreeSet<CostModel>);

fn parse_models(s: &str) -> Result<ModelList, String> {
    let set = s
        .split(',')
        .map(|t| t.parse::<CostModel>().map_err(|e| e.to_string()))
        .collect::<Result<BTreeSet<_>, _>>()?;
    if set.is_empty() {
        return Err("at least one model is required".into());
    }
    Ok(ModelList(set))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PairList(pub Vec<(CostModel, CostModel)>);

fn parse_pairs(s: &str) -> Result<PairList, String> {
    s.split(',')
        .map(|p| {
            let (a, b) = p.split_once(':').ok_or_else(|| format!("pair {p:?} is not M1:M2"))?;
            Ok((
                a.parse::<CostModel>().map_err(|e| e.to_string())?,
                b.parse::<CostModel>().map_err(|e| e.to_string())?,
            ))
        })
        .collect::<Result<Vec<_>, String>>()
        .map(PairList)
}

fn parse_euro(s: &str) -> Result<BigRational, String> {
    apc_share::numeric::parse_decimal(s)
        .filter(|v| *v > BigRational::from_integer(0.into()))
        .ok_or_else(|| format!("{s:?} is not a positive decimal amount"))
}

#[derive(Debug, Clone, Args)]
pub struct Shared {
    /// Publication corpus (JSON Lines).
    #[arg(long, value_name = "PATH")]
    pub corpus: Option<PathBuf>,
    /// Gold-OA ISSN list (CSV with an `issn` column).
    #[arg(long = "gold-oa", value_name = "PATH")]
    pub gold_oa: Option<PathBuf>,
    /// Sector registry (CSV: institution_id,name,sectors).
    #[arg(long, value_name = "PATH")]
    pub registry: Option<PathBuf>,
    /// APC payments (OpenAPC-style CSV); the non-hybrid mean over the year range becomes the average APC.
    #[arg(long, value_name = "PATH")]
    pub payments: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Inclusive publication-year range, or `all`.
    #[arg(long, value_name = "A:B", default_value = "2014:2018", value_parser = parse_years)]
    pub years: Years,
    /// Accepted co-operation types (K0,KNSec,KN,KI,KISec,OutOfScope), or `all`.
    #[arg(long, value_name = "LIST", default_value = "K0,KN,KNSec", value_parser = parse_coop)]
    pub coop: CoopList,
    /// Which affiliated institutions bear cost.
    #[arg(long, value_enum, default_value_t = ScopeArg::Sector)]
    pub scope: ScopeArg,
    /// Cost models: first,reprint,equal,frac-pairs,frac-authors (or 1,2,3,4a,4b).
    #[arg(long, value_name = "LIST", default_value = "first,reprint,equal,frac-pairs,frac-authors", value_parser = parse_models)]
    pub models: ModelList,
    /// Average APC in EUR; overrides --payments.
    #[arg(long = "avg-apc", value_name = "EUR", value_parser = parse_euro)]
    pub avg_apc: Option<BigRational>,
    /// Model pairs compared as M1 minus M2.
    #[arg(long, value_name = "LIST", default_value = "equal:reprint,equal:first,frac-pairs:frac-authors", value_parser = parse_pairs)]
    pub pairs: PairList,
    /// Role shares only for institutions with more than N publications.
    #[arg(long = "min-pubs", value_name = "N", default_value_t = 50)]
    pub min_pubs: usize,
    /// Accept ISSNs with a wrong check digit (reported as warnings).
    #[arg(long = "lax-issn")]
    pub lax_issn: bool,
    /// Keep publications outside Gold-OA journals.
    #[arg(long = "no-gold-oa-filter")]
    pub no_gold_oa_filter: bool,
    /// Keep publications without an APC-eligible document type.
    #[arg(long = "no-doctype-filter")]
    pub no_doctype_filter: bool,
    /// Do not require first and reprint author at a sector institution.
    #[arg(long = "no-sector-role-filter")]
    pub no_sector_role_filter: bool,
    /// Output format.
    #[arg(long, value_enum, default_value_t = FormatArg::Both)]
    pub format: FormatArg,
}

impl Shared {
    pub fn corpus_filter(&self) -> CorpusFilter {
        CorpusFilter {
            year_range: self.years.0,
            coop_types: self.coop.0.clone(),
            require_gold_oa: !self.no_gold_oa_filter,
            require_included_doctype: !self.no_doctype_filter,
            require_sector_first_and_reprint: !self.no_sector_role_filter,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_reproduce_reference_configuration() {
        let cli = Cli::parse_from(["apc-share", "attribute"]);
        let Command::Attribute(shared) = cli.command else {
            panic!()
        };
        assert_eq!(shared.corpus_filter(), CorpusFilter::replication());
        assert_eq!(shared.models.0, CostModel::ALL.into());
        assert_eq!(ParticipantScope::from(shared.scope), ParticipantScope::SectorOnly);
        assert_eq!(shared.pairs.0, apc_share::report::DEFAULT_PAIRS.to_vec());
        assert_eq!(shared.min_pubs, 50);
    }

    #[test]
    fn list_parsers() {
        assert_eq!(parse_years("2010:2012").unwrap(), Years(Some((2010, 2012))));
        assert!(parse_years("2012:2010").is_err());
        assert_eq!(parse_years("all").unwrap(), Years(None));
        assert_eq!(parse_models("first,reprint").unwrap().0.len(), 2);
        assert!(parse_models("first,fifth").is_err());
        assert_eq!(parse_coop("K0").unwrap().0.unwrap().len(), 1);
        assert_eq!(
            parse_pairs("3:2").unwrap().0,
            [(CostModel::EqualShares, CostModel::ReprintAuthor)]
        );
        assert!(parse_euro("-1").is_err());
        assert!(parse_euro("1540").is_ok());
    }
}
