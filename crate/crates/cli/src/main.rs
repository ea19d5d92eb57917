mod args;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use apc_share::analytics::{compute_publication_units, cooperation_distribution};
use apc_share::doctype::doc_type_verdict;
use apc_share::ingest::{
    average_apc, filter_corpus_audited, is_gold_oa, load_apc_payments, load_gold_oa_list, load_sector_registry,
    parse_publication_corpus, FilterAudit, GoldOaIssnList, IssnPolicy, Loaded, Warning,
};
use apc_share::report::{self, build_report, OutputFormat, ReportOptions};
use apc_share::{classify_cooperation, IngestError, Publication, SectorRegistry};
use clap::Parser;
use num_rational::BigRational;

use args::{Cli, Command, Shared};

/// A failed run and its exit code.
#[derive(Debug)]
enum Failure {
    /// Unreadable or structurally broken input, bad configuration, unwritable output.
    Input(String),
    /// Nothing left to analyse after filtering.
    EmptySelection(String),
    /// No payment record matches the average-APC filter.
    Payments(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::EmptySelection(_) => 3,
            Failure::Payments(_) => 4,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Input(m) | Failure::EmptySelection(m) | Failure::Payments(m) => f.write_str(m),
        }
    }
}

impl From<IngestError> for Failure {
    fn from(e: IngestError) -> Self {
        Failure::Input(e.to_string())
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input(format!("cannot write {}: {e}", path.display()))
}

fn required<'a>(path: &'a Option<PathBuf>, flag: &str) -> Result<&'a Path, Failure> {
    path.as_deref()
        .ok_or_else(|| Failure::Input(format!("--{flag} is required for this command")))
}

fn policy(shared: &Shared) -> IssnPolicy {
    if shared.lax_issn {
        IssnPolicy::Lax
    } else {
        IssnPolicy::Strict
    }
}

fn print_warnings(warnings: &[Warning]) {
    for w in warnings {
        eprintln!("warning: {w}");
    }
}

fn load_corpus(shared: &Shared) -> Result<Vec<Publication>, Failure> {
    let loaded = parse_publication_corpus(required(&shared.corpus, "corpus")?)?;
    print_warnings(&loaded.warnings);
    Ok(loaded.value)
}

fn load_registry(shared: &Shared) -> Result<SectorRegistry, Failure> {
    let loaded = load_sector_registry(required(&shared.registry, "registry")?)?;
    print_warnings(&loaded.warnings);
    Ok(loaded.value)
}

fn load_gold_oa(shared: &Shared, needed: bool) -> Result<GoldOaIssnList, Failure> {
    match (&shared.gold_oa, needed) {
        (Some(path), _) => {
            let loaded = load_gold_oa_list(path, policy(shared))?;
            print_warnings(&loaded.warnings);
            Ok(loaded.value)
        }
        (None, false) => Ok(GoldOaIssnList::default()),
        (None, true) => Err(Failure::Input(
            "--gold-oa is required unless --no-gold-oa-filter is set".into(),
        )),
    }
}

fn print_audit(audit: &FilterAudit) {
    println!("{:<26} {:>8}  per year", "stage", "count");
    for (stage, count, by_year) in &audit.stages {
        let years: Vec<String> = by_year.iter().map(|(y, n)| format!("{y}:{n}")).collect();
        println!("{:<26} {:>8}  {}", stage.label(), count, years.join(" "));
    }
}

/// Shared front half of `attribute` and `report`.
fn filtered_corpus(shared: &Shared) -> Result<(Vec<Publication>, SectorRegistry), Failure> {
    let filter = shared.corpus_filter();
    filter.validate().map_err(|e| Failure::Input(e.to_string()))?;
    let corpus = load_corpus(shared)?;
    let registry = load_registry(shared)?;
    let list = load_gold_oa(shared, filter.require_gold_oa)?;
    let (kept, audit) = filter_corpus_audited(&corpus, &filter, &list, &registry);
    print_audit(&audit);
    if kept.is_empty() {
        return Err(Failure::EmptySelection("no publications left after filtering".into()));
    }
    Ok((kept, registry))
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        println!("wrote {}", p.display());
    }
}

fn validate(shared: &Shared) -> Result<(), Failure> {
    fn line<T>(
        name: &str,
        path: &Path,
        result: Result<Loaded<T>, IngestError>,
        hard: &mut Vec<String>,
    ) -> Option<Loaded<T>> {
        match result {
            Ok(l) => {
                println!(
                    "{name} {}: {} valid, {} invalid",
                    path.display(),
                    l.rows - l.rejected,
                    l.rejected
                );
                print_warnings(&l.warnings);
                Some(l)
            }
            Err(e) => {
                println!("{name} {}: error: {e}", path.display());
                hard.push(e.to_string());
                None
            }
        }
    }

    let corpus_path = required(&shared.corpus, "corpus")?;
    let mut hard = Vec::new();
    let mut soft = 0;
    if let Some(corpus) = line("corpus", corpus_path, parse_publication_corpus(corpus_path), &mut hard) {
        soft += corpus.warnings.len();
        for p in &corpus.value {
            for t in doc_type_verdict(p).unknown {
                eprintln!(
                    "warning: {}: publication {}: unknown document type {t:?}",
                    corpus_path.display(),
                    p.id
                );
                soft += 1;
            }
        }
    }
    if let Some(path) = &shared.gold_oa {
        soft +=
            line("gold-oa", path, load_gold_oa_list(path, policy(shared)), &mut hard).map_or(0, |l| l.warnings.len());
    }
    if let Some(path) = &shared.registry {
        soft += line("registry", path, load_sector_registry(path), &mut hard).map_or(0, |l| l.warnings.len());
    }
    if let Some(path) = &shared.payments {
        soft +=
            line("payments", path, load_apc_payments(path, policy(shared)), &mut hard).map_or(0, |l| l.warnings.len());
    }
    println!("{} errors, {} warnings", hard.len(), soft);
    if hard.is_empty() {
        Ok(())
    } else {
        Err(Failure::Input(format!(
            "{} input file(s) failed validation",
            hard.len()
        )))
    }
}

fn classify(shared: &Shared) -> Result<(), Failure> {
    let corpus = load_corpus(shared)?;
    let registry = load_registry(shared)?;
    let list = match &shared.gold_oa {
        Some(_) => Some(load_gold_oa(shared, true)?),
        None => None,
    };
    let mut rows = Vec::with_capacity(corpus.len());
    for p in &corpus {
        let mut row = vec![
            p.id.clone(),
            p.year.to_string(),
            classify_cooperation(p, &registry).code().to_string(),
            doc_type_verdict(p).included.to_string(),
        ];
        if let Some(list) = &list {
            row.push(is_gold_oa(p, list).to_string());
        }
        rows.push(row);
    }
    fs::create_dir_all(&shared.out).map_err(|e| io_failure(&shared.out, e))?;
    let path = shared.out.join("classification.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| Failure::Input(e.to_string()))?;
    let mut header = vec!["id", "year", "coop_type", "included_doc_type"];
    if list.is_some() {
        header.push("gold_oa");
    }
    w.write_record(&header).map_err(|e| Failure::Input(e.to_string()))?;
    for r in rows {
        w.write_record(&r).map_err(|e| Failure::Input(e.to_string()))?;
    }
    w.flush().map_err(|e| io_failure(&path, e))?;
    let dist_path = shared.out.join(report::COOP_DISTRIBUTION_FILE);
    let dist = cooperation_distribution(&corpus, &registry);
    fs::write(&dist_path, report::coop_distribution_csv(&dist)).map_err(|e| io_failure(&dist_path, e))?;
    for (t, n) in &dist.overall.counts {
        println!("{:<11} {:>8}", t.code(), n);
    }
    report_written(&[path, dist_path]);
    Ok(())
}

/// Ids that survived the filter, one per line with year and co-operation type.
fn write_selection(dir: &Path, corpus: &[Publication], registry: &SectorRegistry) -> Result<PathBuf, Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
    let path = dir.join("selection.csv");
    let mut w = csv::Writer::from_path(&path).map_err(|e| Failure::Input(e.to_string()))?;
    w.write_record(["id", "year", "coop_type"])
        .map_err(|e| Failure::Input(e.to_string()))?;
    for p in corpus {
        w.write_record([
            p.id.as_str(),
            &p.year.to_string(),
            classify_cooperation(p, registry).code(),
        ])
        .map_err(|e| Failure::Input(e.to_string()))?;
    }
    w.flush().map_err(|e| io_failure(&path, e))?;
    Ok(path)
}

fn attribute(shared: &Shared) -> Result<(), Failure> {
    let (corpus, registry) = filtered_corpus(shared)?;
    let table = compute_publication_units(&corpus, &shared.models.0, &registry, shared.scope.into());
    for e in &table.excluded {
        eprintln!(
            "warning: publication {} excluded: no payer under model {}",
            e.publication,
            e.model.number()
        );
    }
    println!("attributed {} of {} publications", table.attributed, table.corpus_size);
    let mut written = report::write_pu_table(&shared.out, &table, OutputFormat::from(shared.format))
        .map_err(|e| io_failure(&shared.out, e))?;
    written.push(write_selection(&shared.out, &corpus, &registry)?);
    report_written(&written);
    Ok(())
}

fn resolve_avg_apc(shared: &Shared) -> Result<Option<BigRational>, Failure> {
    if let Some(v) = &shared.avg_apc {
        return Ok(Some(v.clone()));
    }
    let Some(path) = &shared.payments else { return Ok(None) };
    let loaded = load_apc_payments(path, policy(shared))?;
    print_warnings(&loaded.warnings);
    let in_range: Vec<_> = loaded
        .value
        .into_iter()
        .filter(|r| shared.years.0.is_none_or(|(lo, hi)| (lo..=hi).contains(&r.period)))
        .collect();
    average_apc(&in_range, None, Some(false))
        .map(Some)
        .map_err(|e| Failure::Payments(format!("{}: {e}", path.display())))
}

fn run_report(shared: &Shared) -> Result<(), Failure> {
    let avg_apc = resolve_avg_apc(shared)?;
    let (corpus, registry) = filtered_corpus(shared)?;
    let table = compute_publication_units(&corpus, &shared.models.0, &registry, shared.scope.into());
    for e in &table.excluded {
        eprintln!(
            "warning: publication {} excluded: no payer under model {}",
            e.publication,
            e.model.number()
        );
    }
    if table.attributed == 0 {
        return Err(Failure::EmptySelection("no publication could be attributed".into()));
    }
    let options = ReportOptions {
        pairs: shared.pairs.0.clone(),
        min_pubs: shared.min_pubs,
        avg_apc,
    };
    let analysis = build_report(&corpus, table, &registry, &options).map_err(|e| Failure::Input(e.to_string()))?;
    if let Some(m) = &analysis.median_range {
        println!("median pu_diff {}", apc_share::numeric::format_fixed(m, 2));
    }
    let written = report::write_report(&shared.out, &analysis, OutputFormat::from(shared.format))
        .map_err(|e| io_failure(&shared.out, e))?;
    report_written(&written);
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("error")).init();
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Validate(s) => validate(s),
        Command::Classify(s) => classify(s),
        Command::Attribute(s) => attribute(s),
        Command::Report(s) => run_report(s),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code())
        }
    }
}
