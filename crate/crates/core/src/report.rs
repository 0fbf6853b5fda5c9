//! Render a study result into CSV tables and a Markdown report.
//!
//! CSV files carry raw counts (the machine contract); the Markdown report
//! renders the same numbers in the "N (P%)" style of the source tables.
//! Rendering is a pure function of the study result: identical inputs give
//! byte-identical files.

use std::fmt::Write as _;
use std::fs::File;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::analysis::{
    AreaRow, Comparison, Contrast, Indicator, SigSplit, StudyResult,
};
use crate::error::{Error, Result};
use crate::partition::SetCounts;

/// Output formats to emit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportFormats {
    pub csv: bool,
    pub md: bool,
    pub json: bool,
}

impl Default for ReportFormats {
    fn default() -> Self {
        ReportFormats {
            csv: true,
            md: true,
            json: true,
        }
    }
}

impl ReportFormats {
    /// Parse a comma-separated selection like `csv,md`.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut formats = ReportFormats {
            csv: false,
            md: false,
            json: false,
        };
        for token in spec.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            match token {
                "csv" => formats.csv = true,
                "md" => formats.md = true,
                "json" => formats.json = true,
                other => {
                    return Err(Error::InvalidConfig(format!(
                        "unknown format `{other}` (expected csv, md, json)"
                    )))
                }
            }
        }
        if formats == (ReportFormats { csv: false, md: false, json: false }) {
            return Err(Error::InvalidConfig("empty format selection".into()));
        }
        Ok(formats)
    }
}

/// `"N (P%)"` with P rounded half-up to one decimal; an exact total renders
/// as `"N (100%)"`.
pub fn format_count_pct(n: u64, total: u64) -> Result<String> {
    if total == 0 {
        return Err(Error::UndefinedInput(
            "percentage of a zero total".into(),
        ));
    }
    if n > total {
        return Err(Error::UndefinedInput(format!(
            "count {n} exceeds total {total}"
        )));
    }
    Ok(format!("{n} ({}%)", pct_tenths(n, total)))
}

/// Percentage with one decimal, rounded half-up; `"100"` when n == total.
fn pct_tenths(n: u64, total: u64) -> String {
    if n == total {
        return "100".into();
    }
    // floor(1000 n / total + 1/2), exactly
    let tenths = (2000 * n as u128 + total as u128) / (2 * total as u128);
    format!("{}.{}", tenths / 10, tenths % 10)
}

fn fmt_delta(delta: f64) -> String {
    format!("{delta:.2}")
}

/// `"a(+) b(-)"`, or `"-"` when nothing is significant.
fn fmt_split(split: &SigSplit) -> String {
    if split.significant == 0 {
        "-".into()
    } else {
        format!("{}(+) {}(-)", split.positive, split.negative)
    }
}

/// Count cell of an area table: `"N (P%)"`, or bare `"0"`.
fn fmt_sig_count(split: &SigSplit, basis: u64) -> String {
    if split.significant == 0 {
        "0".into()
    } else {
        format_count_pct(split.significant, basis).unwrap_or_else(|_| "0".into())
    }
}

struct CsvFile {
    path: PathBuf,
    writer: csv::Writer<File>,
}

impl CsvFile {
    fn create(dir: &Path, name: &str) -> Result<CsvFile> {
        let path = dir.join(name);
        let file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        Ok(CsvFile {
            writer: csv::Writer::from_writer(file),
            path,
        })
    }

    fn row<S: AsRef<[u8]>>(&mut self, record: impl IntoIterator<Item = S>) -> Result<()> {
        self.writer.write_record(record).map_err(|e| Error::Csv {
            file: self.path.display().to_string(),
            source: e,
        })
    }

    fn finish(mut self) -> Result<PathBuf> {
        self.writer
            .flush()
            .map_err(|e| Error::io(&self.path, e))?;
        Ok(self.path)
    }
}

/// Write the report files into `out_dir`, returning the written paths.
pub fn render_report(
    result: &StudyResult,
    out_dir: &Path,
    formats: &ReportFormats,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let mut written = Vec::new();

    if formats.csv {
        written.push(write_pair_listing(result, out_dir)?);
        written.push(write_summary(result, out_dir)?);
        written.push(write_extremes(result, out_dir)?);
        for (contrast, name) in [
            (Contrast::Set1VsSet2, "area_1v2.csv"),
            (Contrast::Set1VsSet3, "area_1v3.csv"),
            (Contrast::Union12VsSet3, "area_12v3.csv"),
        ] {
            written.push(write_area(result, out_dir, contrast, name)?);
        }
        written.push(write_median_diffs(result, out_dir, Indicator::Aii)?);
        written.push(write_median_diffs(result, out_dir, Indicator::Jii)?);
    }
    if formats.md {
        let path = out_dir.join("report.md");
        let mut file = File::create(&path).map_err(|e| Error::io(&path, e))?;
        file.write_all(render_markdown(result).as_bytes())
            .map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    if formats.json {
        let path = out_dir.join("study.json");
        let json = serde_json::to_string_pretty(result)?;
        std::fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

fn write_pair_listing(result: &StudyResult, dir: &Path) -> Result<PathBuf> {
    let mut csv = CsvFile::create(dir, "pair_listing.csv")?;
    csv.row([
        "first_field",
        "second_field",
        "set1",
        "set1_pct",
        "set2",
        "set2_pct",
        "set3",
        "set3_pct",
        "union12",
        "union12_pct",
        "total",
    ])?;
    let counts_cells = |counts: &SetCounts| -> Vec<String> {
        let pct = |n: u64| {
            if counts.total == 0 {
                String::new()
            } else {
                pct_tenths(n, counts.total)
            }
        };
        vec![
            counts.set1.to_string(),
            pct(counts.set1),
            counts.set2.to_string(),
            pct(counts.set2),
            counts.set3.to_string(),
            pct(counts.set3),
            counts.union12.to_string(),
            pct(counts.union12),
            counts.total.to_string(),
        ]
    };
    for row in &result.pair_sets {
        let mut record = vec![row.first_field.clone(), row.second_field.clone()];
        record.extend(counts_cells(&row.counts));
        csv.row(record)?;
    }
    if !result.pair_sets.is_empty() {
        let mut record = vec!["Total".to_string(), String::new()];
        record.extend(counts_cells(&result.totals.summed));
        csv.row(record)?;
        let dedup = &result.totals.dedup;
        let record = vec![
            "Total without duplicates".to_string(),
            String::new(),
            dedup.set1.to_string(),
            String::new(),
            dedup.set2.to_string(),
            String::new(),
            dedup.set3.to_string(),
            String::new(),
            dedup.union12.to_string(),
            String::new(),
            dedup.total.to_string(),
        ];
        csv.row(record)?;
    }
    csv.finish()
}

/// Significance counts per (indicator, direction, contrast), long format.
fn write_summary(result: &StudyResult, dir: &Path) -> Result<PathBuf> {
    let mut csv = CsvFile::create(dir, "summary.csv")?;
    csv.row([
        "indicator",
        "delta_median_positive",
        "contrast",
        "count",
        "basis",
        "pct",
    ])?;
    for &indicator in result.config.indicators.list() {
        for positive in [true, false] {
            for contrast in [
                Contrast::Set1VsSet2,
                Contrast::Set1VsSet3,
                Contrast::Union12VsSet3,
            ] {
                let (count, basis) = summary_cell(result, indicator, positive, contrast);
                let pct = if basis == 0 {
                    String::new()
                } else {
                    pct_tenths(count, basis)
                };
                csv.row([
                    indicator.label().to_string(),
                    if positive { "Y".into() } else { "N".into() },
                    contrast.label().to_string(),
                    count.to_string(),
                    basis.to_string(),
                    pct,
                ])?;
            }
        }
    }
    csv.finish()
}

fn summary_cell(
    result: &StudyResult,
    indicator: Indicator,
    positive: bool,
    contrast: Contrast,
) -> (u64, u64) {
    let count = result
        .comparisons
        .iter()
        .filter(|c| {
            c.indicator == indicator
                && c.contrast == contrast
                && c.significant
                && ((c.delta_median > 0.0) == positive)
        })
        .count() as u64;
    let basis = match contrast {
        Contrast::Union12VsSet3 => result.field_sets.len() as u64,
        _ => result.pairs.len() as u64,
    };
    (count, basis)
}

fn write_extremes(result: &StudyResult, dir: &Path) -> Result<PathBuf> {
    let mut csv = CsvFile::create(dir, "extremes.csv")?;
    csv.row([
        "contrast",
        "indicator",
        "direction",
        "rank",
        "scope",
        "delta_median",
    ])?;
    for table in &result.extremes {
        for (direction, entries) in [("top", &table.top), ("bottom", &table.bottom)] {
            for (rank, entry) in entries.iter().enumerate() {
                csv.row([
                    table.contrast.label().to_string(),
                    table.indicator.label().to_string(),
                    direction.to_string(),
                    (rank + 1).to_string(),
                    entry.scope.label(),
                    fmt_delta(entry.delta_median),
                ])?;
            }
        }
    }
    csv.finish()
}

fn write_area(
    result: &StudyResult,
    dir: &Path,
    contrast: Contrast,
    name: &str,
) -> Result<PathBuf> {
    let mut csv = CsvFile::create(dir, name)?;
    csv.row([
        "area_code",
        "area_name",
        "scopes",
        "aii_significant",
        "aii_positive",
        "aii_negative",
        "jii_significant",
        "jii_positive",
        "jii_negative",
    ])?;
    let table = result
        .area_tables
        .iter()
        .find(|t| t.contrast == contrast)
        .ok_or_else(|| Error::UndefinedInput(format!("missing area table {contrast:?}")))?;
    let split_cells = |split: &Option<SigSplit>| -> [String; 3] {
        match split {
            Some(s) => [
                s.significant.to_string(),
                s.positive.to_string(),
                s.negative.to_string(),
            ],
            None => [String::new(), String::new(), String::new()],
        }
    };
    for row in table.rows.iter().chain(std::iter::once(&table.total)) {
        if row.area_code == "total" && table.rows.is_empty() {
            break;
        }
        let aii = split_cells(&row.aii);
        let jii = split_cells(&row.jii);
        csv.row([
            row.area_code.clone(),
            row.area_name.clone(),
            row.scopes.to_string(),
            aii[0].clone(),
            aii[1].clone(),
            aii[2].clone(),
            jii[0].clone(),
            jii[1].clone(),
            jii[2].clone(),
        ])?;
    }
    csv.finish()
}

fn write_median_diffs(result: &StudyResult, dir: &Path, indicator: Indicator) -> Result<PathBuf> {
    let name = match indicator {
        Indicator::Aii => "median_diffs_aii.csv",
        Indicator::Jii => "median_diffs_jii.csv",
    };
    let mut csv = CsvFile::create(dir, name)?;
    csv.row(["contrast", "scope", "delta_median"])?;
    for (contrast, comparison) in significant_sorted(result, indicator) {
        csv.row([
            contrast.label().to_string(),
            comparison.scope.label(),
            fmt_delta(comparison.delta_median),
        ])?;
    }
    csv.finish()
}

/// Significant comparisons of one indicator, grouped by contrast and sorted
/// by scope label.
fn significant_sorted(
    result: &StudyResult,
    indicator: Indicator,
) -> Vec<(Contrast, &Comparison)> {
    let mut rows = Vec::new();
    for contrast in [
        Contrast::Set1VsSet2,
        Contrast::Set1VsSet3,
        Contrast::Union12VsSet3,
    ] {
        let mut block: Vec<&Comparison> = result
            .comparisons
            .iter()
            .filter(|c| c.indicator == indicator && c.contrast == contrast && c.significant)
            .collect();
        block.sort_by_key(|c| c.scope.label());
        rows.extend(block.into_iter().map(|c| (contrast, c)));
    }
    rows
}

fn render_markdown(result: &StudyResult) -> String {
    let mut md = String::new();
    let _ = writeln!(md, "# Interdisciplinarity impact study\n");

    let c = &result.config;
    let _ = writeln!(md, "## Configuration\n");
    let _ = writeln!(md, "| parameter | value |");
    let _ = writeln!(md, "|---|---|");
    let _ = writeln!(md, "| degree threshold | {} |", c.threshold);
    let _ = writeln!(md, "| min first-field publications | {} |", c.min_first_count);
    let _ = writeln!(md, "| alpha | {} |", c.alpha);
    let _ = writeln!(md, "| min set size | {} |", c.min_set_size);
    let _ = writeln!(md, "| indicators | {:?} |", c.indicators);
    let _ = writeln!(md, "| seed | {} |", c.seed);
    let _ = writeln!(
        md,
        "| pair list | {} |",
        if c.pair_override.is_some() {
            "external override"
        } else {
            "identified from corpus"
        }
    );
    if !result.warnings.is_empty() {
        let _ = writeln!(md, "\n### Warnings\n");
        for warning in &result.warnings {
            let _ = writeln!(md, "- {warning}");
        }
    }

    // pair listing (source table: per-pair set sizes with shares)
    let _ = writeln!(md, "\n## Pair listing\n");
    let _ = writeln!(
        md,
        "| first field | second field | set 1 | set 2 | set 3 | set (1 U 2) | total |"
    );
    let _ = writeln!(md, "|---|---|---|---|---|---|---|");
    let cells = |counts: &SetCounts| -> [String; 5] {
        if counts.total == 0 {
            return [
                "0".into(),
                "0".into(),
                "0".into(),
                "0".into(),
                "0".into(),
            ];
        }
        [
            format_count_pct(counts.set1, counts.total).unwrap(),
            format_count_pct(counts.set2, counts.total).unwrap(),
            format_count_pct(counts.set3, counts.total).unwrap(),
            format_count_pct(counts.union12, counts.total).unwrap(),
            format_count_pct(counts.total, counts.total).unwrap(),
        ]
    };
    for row in &result.pair_sets {
        let c = cells(&row.counts);
        let _ = writeln!(
            md,
            "| {} | {} | {} | {} | {} | {} | {} |",
            row.first_field, row.second_field, c[0], c[1], c[2], c[3], c[4]
        );
    }
    if !result.pair_sets.is_empty() {
        let c = cells(&result.totals.summed);
        let _ = writeln!(md, "| Total |  | {} | {} | {} | {} | {} |", c[0], c[1], c[2], c[3], c[4]);
        let d = &result.totals.dedup;
        let _ = writeln!(
            md,
            "| Total without duplicates |  | {} | {} | {} | {} | {} |",
            d.set1, d.set2, d.set3, d.union12, d.total
        );
    }

    // significance summary (source table: counts of significant differences)
    let _ = writeln!(md, "\n## Significant distribution differences\n");
    let _ = writeln!(
        md,
        "| indicator | Δ median > 0 | {} (pairs) | {} (pairs) | {} (first fields) |",
        Contrast::Set1VsSet2.heading(),
        Contrast::Set1VsSet3.heading(),
        Contrast::Union12VsSet3.heading()
    );
    let _ = writeln!(md, "|---|---|---|---|---|");
    for &indicator in result.config.indicators.list() {
        for positive in [true, false] {
            let mut row = format!(
                "| {} | {} |",
                indicator.label(),
                if positive { "Y" } else { "N" }
            );
            for contrast in [
                Contrast::Set1VsSet2,
                Contrast::Set1VsSet3,
                Contrast::Union12VsSet3,
            ] {
                let (count, basis) = summary_cell(result, indicator, positive, contrast);
                let cell = if count == 0 {
                    "0".to_string()
                } else {
                    format_count_pct(count, basis).unwrap_or_else(|_| count.to_string())
                };
                let _ = write!(row, " {cell} |");
            }
            let _ = writeln!(md, "{row}");
        }
    }

    // extreme median differences
    let _ = writeln!(md, "\n## Maximum significant median differences\n");
    for table in &result.extremes {
        let _ = writeln!(
            md,
            "### {} — {}\n",
            table.contrast.heading(),
            table.indicator.label()
        );
        if table.top.is_empty() {
            let _ = writeln!(md, "(no significant comparisons)\n");
            continue;
        }
        let _ = writeln!(md, "| direction | Δ median | scope |");
        let _ = writeln!(md, "|---|---|---|");
        for entry in &table.top {
            let _ = writeln!(md, "| Δ↑ | {} | {} |", fmt_delta(entry.delta_median), entry.scope.label());
        }
        for entry in &table.bottom {
            let _ = writeln!(md, "| Δ↓ | {} | {} |", fmt_delta(entry.delta_median), entry.scope.label());
        }
        let _ = writeln!(md);
    }

    // per-area tables
    for table in &result.area_tables {
        let _ = writeln!(
            md,
            "\n## Rank-sum comparison of {} by area\n",
            table.contrast.heading()
        );
        let scope_head = match table.contrast {
            Contrast::Union12VsSet3 => "first fields",
            _ => "pairs",
        };
        let _ = writeln!(
            md,
            "| area | total {scope_head} | AII significant | AII Δ median | JII significant | JII Δ median |"
        );
        let _ = writeln!(md, "|---|---|---|---|---|---|");
        let grand_total = table.total.scopes;
        let row_cells = |row: &AreaRow, basis_total: u64| -> String {
            let scope_cell = if grand_total == 0 {
                row.scopes.to_string()
            } else {
                format_count_pct(row.scopes, basis_total).unwrap_or_else(|_| row.scopes.to_string())
            };
            let indicator_cells = |split: &Option<SigSplit>| -> (String, String) {
                match split {
                    Some(s) => (fmt_sig_count(s, row.scopes), fmt_split(s)),
                    None => (String::new(), String::new()),
                }
            };
            let (aii_count, aii_split) = indicator_cells(&row.aii);
            let (jii_count, jii_split) = indicator_cells(&row.jii);
            format!(
                "| {} | {} | {} | {} | {} | {} |",
                row.area_name, scope_cell, aii_count, aii_split, jii_count, jii_split
            )
        };
        for row in &table.rows {
            let _ = writeln!(md, "{}", row_cells(row, grand_total));
        }
        if !table.rows.is_empty() {
            // total row shows the absolute scope count, not a share
            let total = &table.total;
            let cell = |split: &Option<SigSplit>| match split {
                Some(s) => (fmt_sig_count(s, total.scopes), fmt_split(s)),
                None => (String::new(), String::new()),
            };
            let (aii_count, aii_split) = cell(&total.aii);
            let (jii_count, jii_split) = cell(&total.jii);
            let _ = writeln!(
                md,
                "| Total | {} | {} | {} | {} | {} |",
                total.scopes, aii_count, aii_split, jii_count, jii_split
            );
        }
    }

    // per-indicator median difference listings
    for &indicator in result.config.indicators.list() {
        let _ = writeln!(
            md,
            "\n## {} median differences (significant only)\n",
            indicator.label()
        );
        let rows = significant_sorted(result, indicator);
        if rows.is_empty() {
            let _ = writeln!(md, "(none)");
            continue;
        }
        let _ = writeln!(md, "| comparison | Δ {} | scope |", indicator.label());
        let _ = writeln!(md, "|---|---|---|");
        for (contrast, comparison) in rows {
            let _ = writeln!(
                md,
                "| {} | {} | {} |",
                contrast.heading(),
                fmt_delta(comparison.delta_median),
                comparison.scope.label()
            );
        }
    }

    md
}
