//! CSV and JSON emission. This is the only place exact values become decimals:
//! publication units get two decimals, money whole euros, both rounded half-up.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use num_rational::BigRational;
use serde_json::{json, Value};

use crate::analytics::{
    author_count_distribution, author_role_shares, cooperation_distribution, estimate_cost, median_range,
    pairwise_model_comparison, range_report, sector_totals, AuthorCountDistribution, AuthorRole, BoxStats,
    CoopBreakdown, CoopDistribution, PairwiseComparison, PublicationUnitsTable, RangeReportRow, RoleShares,
    SectorTotals, QUARTILE_RULE,
};
use crate::error::AnalyticsError;
use crate::model::{CooperationType, CostModel, Publication, SectorRegistry};
use crate::numeric::{format_fixed, format_fraction};

pub const PU_TABLE_FILE: &str = "pu_table.csv";
pub const RANGE_REPORT_FILE: &str = "range_report.csv";
pub const SECTOR_TOTALS_FILE: &str = "sector_totals.csv";
pub const COOP_DISTRIBUTION_FILE: &str = "coop_distribution.csv";
pub const AUTHOR_COUNTS_FILE: &str = "author_counts.csv";
pub const AUTHOR_BOXPLOT_FILE: &str = "author_count_boxplot.csv";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const PU_TABLE_JSON: &str = "pu_table.json";
pub const REPORT_JSON: &str = "report.json";

/// Pairs compared by default: 3 vs 2, 3 vs 1, 4a vs 4b.
pub const DEFAULT_PAIRS: [(CostModel, CostModel); 3] = [
    (CostModel::EqualShares, CostModel::ReprintAuthor),
    (CostModel::EqualShares, CostModel::FirstAuthor),
    (
        CostModel::FractionalByAuthorInstitutionPair,
        CostModel::FractionalByAuthor,
    ),
];

pub fn pairwise_file_name(m1: CostModel, m2: CostModel) -> String {
    format!("pairwise_{}_{}.csv", m1.slug(), m2.slug())
}

pub fn role_shares_file_name(role: AuthorRole) -> String {
    format!("role_shares_{}.csv", role.slug())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    Csv,
    Json,
    #[default]
    Both,
}

impl OutputFormat {
    pub fn csv(self) -> bool {
        matches!(self, OutputFormat::Csv | OutputFormat::Both)
    }

    pub fn json(self) -> bool {
        matches!(self, OutputFormat::Json | OutputFormat::Both)
    }
}

fn pu(v: &BigRational) -> String {
    format_fixed(v, 2)
}

fn euros(v: &BigRational) -> String {
    format_fixed(v, 0)
}

fn csv_string(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
}

/// Institution rows with a rounded and an exact column per model.
pub fn pu_table_csv(table: &PublicationUnitsTable) -> String {
    let mut header = vec!["institution".to_string()];
    for m in table.models() {
        header.push(m.slug().to_string());
        header.push(format!("{}_exact", m.slug()));
    }
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_string(
        &header,
        table.rows().map(|(id, values)| {
            let mut row = vec![id.to_string()];
            for v in values {
                row.push(pu(v));
                row.push(format_fraction(v));
            }
            row
        }),
    )
}

/// Range rows; with an average APC, adds `euro_diff = pu_diff * avg_apc`.
pub fn range_report_csv(rows: &[RangeReportRow], avg_apc: Option<&BigRational>) -> String {
    let mut header = vec!["institution", "pu_min", "pu_max", "pu_diff", "model_min", "model_max"];
    if avg_apc.is_some() {
        header.push("euro_diff");
    }
    csv_string(
        &header,
        rows.iter().map(|r| {
            let mut row = vec![
                r.institution.to_string(),
                pu(&r.pu_min),
                pu(&r.pu_max),
                pu(&r.pu_diff),
                r.model_min.number().to_string(),
                r.model_max.number().to_string(),
            ];
            if let Some(apc) = avg_apc {
                row.push(estimate_cost(&r.pu_diff, apc).to_string());
            }
            row
        }),
    )
}

pub fn pairwise_csv(cmp: &PairwiseComparison) -> String {
    csv_string(
        &["institution", "diff", "diff_exact"],
        cmp.diffs
            .iter()
            .map(|(id, d)| vec![id.to_string(), pu(d), format_fraction(d)]),
    )
}

pub fn sector_totals_csv(totals: &SectorTotals) -> String {
    let mut header = vec!["sector"];
    header.extend(totals.models.iter().map(|m| m.slug()));
    csv_string(
        &header,
        totals.rows.iter().map(|r| {
            let mut row = vec![r.sector.to_string()];
            row.extend(r.totals.iter().map(pu));
            row
        }),
    )
}

pub fn role_shares_csv(shares: &RoleShares) -> String {
    csv_string(
        &["institution", "n_pubs", "n_role", "role_share"],
        shares.rows.iter().map(|r| {
            vec![
                r.institution.to_string(),
                r.n_pubs.to_string(),
                r.n_role.to_string(),
                format_fixed(&r.role_share, 4),
            ]
        }),
    )
}

fn coop_rows<'a>(label: &'a str, b: &'a CoopBreakdown) -> impl Iterator<Item = Vec<String>> + 'a {
    b.counts.iter().map(move |(t, n)| {
        vec![
            label.to_string(),
            t.code().to_string(),
            n.to_string(),
            format_fixed(&b.percentage(*t), 2),
        ]
    })
}

pub fn coop_distribution_csv(dist: &CoopDistribution) -> String {
    let sector_labels: Vec<(String, &CoopBreakdown)> =
        dist.per_sector.iter().map(|(s, b)| (s.to_string(), b)).collect();
    let mut rows: Vec<Vec<String>> = coop_rows("ALL", &dist.overall).collect();
    for (label, b) in &sector_labels {
        rows.extend(coop_rows(label, b));
    }
    csv_string(&["breakdown", "coop_type", "count", "percentage"], rows)
}

pub fn author_counts_csv(dist: &AuthorCountDistribution) -> String {
    csv_string(
        &["n_authors", "count"],
        dist.histogram.iter().map(|(k, v)| vec![k.to_string(), v.to_string()]),
    )
}

fn box_row(label: String, b: &BoxStats) -> Vec<String> {
    vec![
        label,
        b.n.to_string(),
        pu(&b.min),
        pu(&b.q1),
        pu(&b.median),
        pu(&b.q3),
        pu(&b.max),
        QUARTILE_RULE.to_string(),
    ]
}

pub fn author_boxplot_csv(dist: &AuthorCountDistribution) -> String {
    let rows = dist
        .overall
        .iter()
        .map(|b| box_row("ALL".into(), b))
        .chain(dist.per_sector.iter().map(|(s, b)| box_row(s.to_string(), b)));
    csv_string(
        &["breakdown", "n", "min", "q1", "median", "q3", "max", "quartile_rule"],
        rows,
    )
}

/// Everything `report` emits, computed from an already filtered corpus.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub table: PublicationUnitsTable,
    pub range: Vec<RangeReportRow>,
    pub median_range: Option<BigRational>,
    pub avg_apc: Option<BigRational>,
    pub pairwise: Vec<PairwiseComparison>,
    pub sectors: SectorTotals,
    pub roles: Vec<RoleShares>,
    pub coop: CoopDistribution,
    pub author_counts: AuthorCountDistribution,
}

#[derive(Debug, Clone)]
pub struct ReportOptions {
    pub pairs: Vec<(CostModel, CostModel)>,
    pub min_pubs: usize,
    pub avg_apc: Option<BigRational>,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            pairs: DEFAULT_PAIRS.to_vec(),
            min_pubs: 50,
            avg_apc: None,
        }
    }
}

/// Run every analysis on `corpus` given its units table.
pub fn build_report(
    corpus: &[Publication],
    table: PublicationUnitsTable,
    registry: &SectorRegistry,
    options: &ReportOptions,
) -> Result<AnalysisReport, AnalyticsError> {
    let range = range_report(&table);
    let median = median_range(&range).ok();
    let pairwise = options
        .pairs
        .iter()
        .map(|(a, b)| pairwise_model_comparison(&table, *a, *b))
        .collect::<Result<Vec<_>, _>>()?;
    let sectors = sector_totals(&table, registry);
    let roles = [AuthorRole::First, AuthorRole::Reprint]
        .into_iter()
        .map(|r| author_role_shares(corpus, registry, r, options.min_pubs))
        .collect();
    Ok(AnalysisReport {
        range,
        median_range: median,
        avg_apc: options.avg_apc.clone(),
        pairwise,
        sectors,
        roles,
        coop: cooperation_distribution(corpus, registry),
        author_counts: author_count_distribution(corpus, registry),
        table,
    })
}

fn summary_csv(report: &AnalysisReport) -> String {
    let mut rows = vec![
        vec!["corpus_size".to_string(), report.table.corpus_size.to_string()],
        vec!["attributed".to_string(), report.table.attributed.to_string()],
        vec!["excluded".to_string(), report.table.excluded.len().to_string()],
        vec!["scope".to_string(), report.table.scope.slug().to_string()],
    ];
    if let Some(m) = &report.median_range {
        rows.push(vec!["median_pu_diff".into(), pu(m)]);
        if let Some(apc) = &report.avg_apc {
            rows.push(vec!["median_euro_diff".into(), estimate_cost(m, apc).to_string()]);
        }
    }
    if let Some(apc) = &report.avg_apc {
        rows.push(vec!["avg_apc".into(), euros(apc)]);
    }
    for r in &report.roles {
        if let Some(mean) = &r.mean {
            rows.push(vec![
                format!("mean_{}_author_share", r.role.slug()),
                format_fixed(mean, 4),
            ]);
        }
    }
    csv_string(&["key", "value"], rows)
}

fn table_json(table: &PublicationUnitsTable) -> Value {
    let rows: Vec<Value> = table
        .rows()
        .map(|(id, values)| {
            let cells: serde_json::Map<String, Value> = table
                .models()
                .iter()
                .zip(values)
                .map(|(m, v)| (m.slug().to_string(), json!({"pu": pu(v), "exact": format_fraction(v)})))
                .collect();
            json!({"institution": id.as_str(), "cells": cells})
        })
        .collect();
    let excluded: Vec<Value> = table
        .excluded
        .iter()
        .map(|e| json!({"publication": e.publication, "model": e.model.slug()}))
        .collect();
    json!({
        "models": table.models().iter().map(|m| m.slug()).collect::<Vec<_>>(),
        "scope": table.scope.slug(),
        "corpus_size": table.corpus_size,
        "attributed": table.attributed,
        "excluded": excluded,
        "rows": rows,
    })
}

fn coop_json(b: &CoopBreakdown) -> Value {
    let counts: serde_json::Map<String, Value> = CooperationType::ALL
        .iter()
        .filter_map(|t| {
            b.counts.get(t).map(|n| {
                (
                    t.code().to_string(),
                    json!({"count": n, "percentage": format_fixed(&b.percentage(*t), 2)}),
                )
            })
        })
        .collect();
    json!({"total": b.total, "types": counts})
}

fn box_json(b: &BoxStats) -> Value {
    json!({"n": b.n, "min": pu(&b.min), "q1": pu(&b.q1), "median": pu(&b.median), "q3": pu(&b.q3), "max": pu(&b.max)})
}

pub fn report_json(report: &AnalysisReport) -> Value {
    let range: Vec<Value> = report
        .range
        .iter()
        .map(|r| {
            let mut v = json!({
                "institution": r.institution.as_str(),
                "pu_min": pu(&r.pu_min),
                "pu_max": pu(&r.pu_max),
                "pu_diff": pu(&r.pu_diff),
                "model_min": r.model_min.number(),
                "model_max": r.model_max.number(),
            });
            if let Some(apc) = &report.avg_apc {
                v["euro_diff"] = json!(estimate_cost(&r.pu_diff, apc).to_string());
            }
            v
        })
        .collect();
    let pairwise: Vec<Value> = report
        .pairwise
        .iter()
        .map(|c| {
            json!({
                "m1": c.m1.slug(),
                "m2": c.m2.slug(),
                "mean": pu(&c.mean),
                "median": pu(&c.median),
                "max_abs": pu(&c.max_abs),
                "diffs": c.diffs.iter().map(|(id, d)| json!([id.as_str(), pu(d)])).collect::<Vec<_>>(),
            })
        })
        .collect();
    let sectors: Vec<Value> = report
        .sectors
        .rows
        .iter()
        .map(|r| {
            let totals: serde_json::Map<String, Value> = report
                .sectors
                .models
                .iter()
                .zip(&r.totals)
                .map(|(m, v)| (m.slug().to_string(), json!(pu(v))))
                .collect();
            json!({"sector": r.sector.code(), "totals": totals})
        })
        .collect();
    let roles: Vec<Value> = report
        .roles
        .iter()
        .map(|r| {
            json!({
                "role": r.role.slug(),
                "min_pubs": r.min_pubs,
                "mean": r.mean.as_ref().map(|m| format_fixed(m, 4)),
                "rows": r.rows.iter().map(|x| json!({
                    "institution": x.institution.as_str(),
                    "n_pubs": x.n_pubs,
                    "n_role": x.n_role,
                    "role_share": format_fixed(&x.role_share, 4),
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let coop_sectors: serde_json::Map<String, Value> = report
        .coop
        .per_sector
        .iter()
        .map(|(s, b)| (s.to_string(), coop_json(b)))
        .collect();
    let box_sectors: serde_json::Map<String, Value> = report
        .author_counts
        .per_sector
        .iter()
        .map(|(s, b)| (s.to_string(), box_json(b)))
        .collect();
    json!({
        "pu_table": table_json(&report.table),
        "range_report": range,
        "median_pu_diff": report.median_range.as_ref().map(pu),
        "avg_apc": report.avg_apc.as_ref().map(euros),
        "pairwise": pairwise,
        "sector_totals": {"rows": sectors, "unknown_institutions": report.sectors.unknown.iter().map(|i| i.as_str()).collect::<Vec<_>>()},
        "role_shares": roles,
        "cooperation": {"overall": coop_json(&report.coop.overall), "per_sector": coop_sectors},
        "author_counts": {
            "histogram": report.author_counts.histogram.iter().map(|(k, v)| json!([k, v])).collect::<Vec<_>>(),
            "overall": report.author_counts.overall.as_ref().map(box_json),
            "per_sector": box_sectors,
            "quartile_rule": QUARTILE_RULE,
        },
    })
}

fn write(dir: &Path, name: &str, content: &str, written: &mut Vec<PathBuf>) -> io::Result<()> {
    let path = dir.join(name);
    fs::write(&path, content)?;
    written.push(path);
    Ok(())
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// Write the units table alone (`attribute`).
pub fn write_pu_table(dir: &Path, table: &PublicationUnitsTable, format: OutputFormat) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if format.csv() {
        write(dir, PU_TABLE_FILE, &pu_table_csv(table), &mut written)?;
    }
    if format.json() {
        write(dir, PU_TABLE_JSON, &pretty(&table_json(table)), &mut written)?;
    }
    Ok(written)
}

/// Write every report artifact (`report`). Returns the paths written, in order.
pub fn write_report(dir: &Path, report: &AnalysisReport, format: OutputFormat) -> io::Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    if format.csv() {
        write(dir, PU_TABLE_FILE, &pu_table_csv(&report.table), &mut written)?;
        write(
            dir,
            RANGE_REPORT_FILE,
            &range_report_csv(&report.range, report.avg_apc.as_ref()),
            &mut written,
        )?;
        for c in &report.pairwise {
            write(dir, &pairwise_file_name(c.m1, c.m2), &pairwise_csv(c), &mut written)?;
        }
        write(
            dir,
            SECTOR_TOTALS_FILE,
            &sector_totals_csv(&report.sectors),
            &mut written,
        )?;
        for r in &report.roles {
            write(dir, &role_shares_file_name(r.role), &role_shares_csv(r), &mut written)?;
        }
        write(
            dir,
            COOP_DISTRIBUTION_FILE,
            &coop_distribution_csv(&report.coop),
            &mut written,
        )?;
        write(
            dir,
            AUTHOR_COUNTS_FILE,
            &author_counts_csv(&report.author_counts),
            &mut written,
        )?;
        write(
            dir,
            AUTHOR_BOXPLOT_FILE,
            &author_boxplot_csv(&report.author_counts),
            &mut written,
        )?;
        write(dir, SUMMARY_FILE, &summary_csv(report), &mut written)?;
    }
    if format.json() {
        write(dir, REPORT_JSON, &pretty(&report_json(report)), &mut written)?;
    }
    Ok(written)
}
