//! Per-publication impact indicators, normalized against corpus-wide
//! baselines.
//!
//! * AII (article impact index): citations divided by the mean citations of
//!   the cited publications indexed in the same year and subject category.
//! * JII (journal impact index): the journal's impact factor at the
//!   publication year divided by the mean impact factor of the journals
//!   carrying the same category that year.
//!
//! Multi-category publications take the arithmetic mean of the per-category
//! ratios. A value is undefined when a needed baseline stratum is undefined,
//! the category list is empty, or (for JII) the impact factor is absent.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::exec;

/// Per-(year, category) normalization baselines.
///
/// Strata with no cited publication (or no impact-factor-bearing journal)
/// are simply absent.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BaselineTable {
    /// Mean citations over publications with at least one citation.
    pub citation: BTreeMap<(i32, String), f64>,
    /// Mean impact factor over distinct journals carrying the category.
    pub impact: BTreeMap<(i32, String), f64>,
}

/// Indicator values for one publication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorScore {
    pub pub_id: String,
    pub aii: Option<f64>,
    pub jii: Option<f64>,
    /// Categories the ratios were averaged over.
    pub categories: Vec<String>,
}

/// Compute citation and impact-factor baselines over the entire corpus.
pub fn compute_baselines(corpus: &Corpus) -> BaselineTable {
    compute_baselines_impl(corpus, true)
}

/// Sequential variant of [`compute_baselines`].
pub fn compute_baselines_seq(corpus: &Corpus) -> BaselineTable {
    compute_baselines_impl(corpus, false)
}

fn compute_baselines_impl(corpus: &Corpus, parallel: bool) -> BaselineTable {
    // Bucket sequentially in deterministic order, then reduce each stratum
    // independently. Citation sums are integers, so the mean is exact and
    // order-free; impact-factor sums follow sorted journal order.
    let mut citation_strata: BTreeMap<(i32, String), Vec<u64>> = BTreeMap::new();
    for publication in corpus.publications() {
        if publication.citations == 0 {
            continue;
        }
        for category in &publication.categories {
            citation_strata
                .entry((publication.year, category.clone()))
                .or_default()
                .push(publication.citations);
        }
    }

    let mut impact_strata: BTreeMap<(i32, String), Vec<f64>> = BTreeMap::new();
    for journal in corpus.journals().values() {
        for (&year, record) in &journal.years {
            let Some(impact) = record.impact_factor else {
                continue;
            };
            for category in &record.categories {
                impact_strata
                    .entry((year, category.clone()))
                    .or_default()
                    .push(impact);
            }
        }
    }

    let citation_entries: Vec<((i32, String), Vec<u64>)> = citation_strata.into_iter().collect();
    let citation: BTreeMap<(i32, String), f64> =
        exec::map_collect(&citation_entries, parallel, |(key, counts)| {
            let sum: u128 = counts.iter().map(|&c| c as u128).sum();
            (key.clone(), sum as f64 / counts.len() as f64)
        })
        .into_iter()
        .collect();

    let impact_entries: Vec<((i32, String), Vec<f64>)> = impact_strata.into_iter().collect();
    let impact: BTreeMap<(i32, String), f64> =
        exec::map_collect(&impact_entries, parallel, |(key, values)| {
            let sum: f64 = values.iter().sum();
            (key.clone(), sum / values.len() as f64)
        })
        .into_iter()
        .collect();

    BaselineTable { citation, impact }
}

/// Article impact index of one publication, or None where undefined.
pub fn aii(corpus: &Corpus, pub_idx: usize, baselines: &BaselineTable) -> Option<f64> {
    let publication = &corpus.publications()[pub_idx];
    if publication.categories.is_empty() {
        return None;
    }
    let mut sum = 0.0;
    for category in &publication.categories {
        let baseline = baselines
            .citation
            .get(&(publication.year, category.clone()))?;
        sum += publication.citations as f64 / baseline;
    }
    Some(sum / publication.categories.len() as f64)
}

/// Journal impact index of one publication, or None where undefined.
pub fn jii(corpus: &Corpus, pub_idx: usize, baselines: &BaselineTable) -> Option<f64> {
    let publication = &corpus.publications()[pub_idx];
    if publication.categories.is_empty() {
        return None;
    }
    let impact = corpus.impact_factor(&publication.journal_id, publication.year)?;
    let mut sum = 0.0;
    for category in &publication.categories {
        let baseline = baselines
            .impact
            .get(&(publication.year, category.clone()))?;
        sum += impact / baseline;
    }
    Some(sum / publication.categories.len() as f64)
}

/// Score every publication. The result is index-aligned with
/// `corpus.publications()`.
pub fn score_corpus(corpus: &Corpus, baselines: &BaselineTable) -> Vec<IndicatorScore> {
    score_corpus_impl(corpus, baselines, true)
}

/// Sequential variant of [`score_corpus`].
pub fn score_corpus_seq(corpus: &Corpus, baselines: &BaselineTable) -> Vec<IndicatorScore> {
    score_corpus_impl(corpus, baselines, false)
}

pub(crate) fn score_corpus_impl(
    corpus: &Corpus,
    baselines: &BaselineTable,
    parallel: bool,
) -> Vec<IndicatorScore> {
    exec::map_range(corpus.publications().len(), parallel, |idx| {
        let publication = &corpus.publications()[idx];
        IndicatorScore {
            pub_id: publication.id.clone(),
            aii: aii(corpus, idx, baselines),
            jii: jii(corpus, idx, baselines),
            categories: publication.categories.clone(),
        }
    })
}

/// Write `indicators.csv` (pub_id, aii, jii; empty cell for undefined).
pub fn write_indicators_csv(path: &Path, scores: &[IndicatorScore]) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).map_err(|e| Error::Csv {
        file: path.display().to_string(),
        source: e,
    })?;
    let fmt = |v: Option<f64>| v.map(|x| format!("{x}")).unwrap_or_default();
    writer
        .write_record(["pub_id", "aii", "jii"])
        .and_then(|_| {
            scores.iter().try_for_each(|s| {
                writer.write_record([s.pub_id.as_str(), &fmt(s.aii), &fmt(s.jii)])
            })
        })
        .map_err(|e| Error::Csv {
            file: path.display().to_string(),
            source: e,
        })?;
    writer.flush().map_err(|e| Error::io(path, e))?;
    Ok(())
}
