//! Study orchestration: for every qualifying pair, compare Set 1 vs Set 2
//! and Set 1 vs Set 3; for every first field, compare Set (1∪2) vs Set 3 —
//! each on both indicators — then aggregate by area, extract extreme median
//! differences, and compute deduplicated totals.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{Corpus, FieldScheme};
use crate::error::{Error, Result};
use crate::exec;
use crate::indicators;
use crate::pairing::{self, PairProfile};
use crate::partition::{self, PublicationSets, Scope, SetCounts};
use crate::stats::{self, MannWhitneyTest, ShapiroWilkTest};

/// Which indicators a study computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IndicatorSelection {
    #[default]
    Both,
    AiiOnly,
    JiiOnly,
}

impl IndicatorSelection {
    pub fn list(self) -> &'static [Indicator] {
        match self {
            IndicatorSelection::Both => &[Indicator::Aii, Indicator::Jii],
            IndicatorSelection::AiiOnly => &[Indicator::Aii],
            IndicatorSelection::JiiOnly => &[Indicator::Jii],
        }
    }

    pub fn includes(self, indicator: Indicator) -> bool {
        self.list().contains(&indicator)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Indicator {
    Aii,
    Jii,
}

impl Indicator {
    pub fn label(self) -> &'static str {
        match self {
            Indicator::Aii => "AII",
            Indicator::Jii => "JII",
        }
    }
}

/// The three set contrasts of the study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Contrast {
    Set1VsSet2,
    Set1VsSet3,
    Union12VsSet3,
}

impl Contrast {
    pub fn label(self) -> &'static str {
        match self {
            Contrast::Set1VsSet2 => "set1_vs_set2",
            Contrast::Set1VsSet3 => "set1_vs_set3",
            Contrast::Union12VsSet3 => "set12_vs_set3",
        }
    }

    /// Human form used in report headings, e.g. "set 1 vs set 2".
    pub fn heading(self) -> &'static str {
        match self {
            Contrast::Set1VsSet2 => "set 1 vs set 2",
            Contrast::Set1VsSet3 => "set 1 vs set 3",
            Contrast::Union12VsSet3 => "set (1 U 2) vs set 3",
        }
    }

    pub const PAIR_CONTRASTS: [Contrast; 2] = [Contrast::Set1VsSet2, Contrast::Set1VsSet3];
}

/// Study parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    /// Specific-degree threshold for qualifying pairs (strictly above).
    pub threshold: f64,
    /// Minimum first-field publication count for qualifying pairs.
    pub min_first_count: u64,
    /// Significance level for the rank-sum test.
    pub alpha: f64,
    /// Minimum defined-indicator sample size per set; smaller comparisons
    /// are reported as insufficient data.
    pub min_set_size: usize,
    pub indicators: IndicatorSelection,
    /// Seed for the normality-test subsampling of oversized samples.
    pub seed: u64,
    /// Externally fixed pair list; bypasses pair identification.
    pub pair_override: Option<Vec<(String, String)>>,
}

impl Default for StudyConfig {
    fn default() -> Self {
        StudyConfig {
            threshold: 0.10,
            min_first_count: 100,
            alpha: 0.05,
            min_set_size: 10,
            indicators: IndicatorSelection::Both,
            seed: 42,
            pair_override: None,
        }
    }
}

impl StudyConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "alpha must be in (0, 1), got {}",
                self.alpha
            )));
        }
        if self.min_set_size < 3 {
            return Err(Error::InvalidConfig(format!(
                "min_set_size must be at least 3, got {}",
                self.min_set_size
            )));
        }
        if !(self.threshold > 0.0 && self.threshold <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "threshold must be in (0, 1], got {}",
                self.threshold
            )));
        }
        Ok(())
    }
}

/// One set-vs-set test with enough data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub scope: Scope,
    pub contrast: Contrast,
    pub indicator: Indicator,
    pub n1: usize,
    pub n2: usize,
    /// Normality pretests (advisory; absent when a sample is too small or
    /// degenerate).
    pub normality1: Option<ShapiroWilkTest>,
    pub normality2: Option<ShapiroWilkTest>,
    pub rank_sum: MannWhitneyTest,
    pub median1: f64,
    pub median2: f64,
    pub delta_median: f64,
    pub significant: bool,
    pub warnings: Vec<String>,
}

/// A comparison slot skipped for lack of data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InsufficientData {
    pub scope: Scope,
    pub contrast: Contrast,
    pub indicator: Indicator,
    pub n1: usize,
    pub n2: usize,
}

/// Per-pair set counts (one row of the pair listing).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSetRow {
    pub first_field: String,
    pub second_field: String,
    pub counts: SetCounts,
}

/// Per-first-field set counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSetRow {
    pub field: String,
    pub counts: SetCounts,
}

/// Significant / positive / non-positive counts for one indicator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigSplit {
    pub significant: u64,
    /// Significant with delta_median > 0.
    pub positive: u64,
    /// Significant with delta_median <= 0.
    pub negative: u64,
}

/// One area row of an area summary table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaRow {
    pub area_code: String,
    pub area_name: String,
    /// Scopes (pairs or first fields) whose first field belongs to the area.
    pub scopes: u64,
    pub aii: Option<SigSplit>,
    pub jii: Option<SigSplit>,
}

/// Area summary for one contrast, plus the grand-total row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AreaTable {
    pub contrast: Contrast,
    pub rows: Vec<AreaRow>,
    pub total: AreaRow,
}

/// Top and bottom significant median differences for one contrast/indicator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Extremes {
    pub contrast: Contrast,
    pub indicator: Indicator,
    pub top: Vec<ExtremeEntry>,
    pub bottom: Vec<ExtremeEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremeEntry {
    pub scope: Scope,
    pub delta_median: f64,
}

/// Summed (double-counting) and deduplicated scheme-wide totals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StudyTotals {
    pub summed: SetCounts,
    pub dedup: SetCounts,
}

/// Everything the report renders.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyResult {
    pub config: StudyConfig,
    pub pairs: Vec<PairProfile>,
    pub pair_sets: Vec<PairSetRow>,
    pub field_sets: Vec<FieldSetRow>,
    pub comparisons: Vec<Comparison>,
    pub insufficient: Vec<InsufficientData>,
    pub area_tables: Vec<AreaTable>,
    pub extremes: Vec<Extremes>,
    pub totals: StudyTotals,
    pub warnings: Vec<String>,
}

/// Number of entries per extreme list, matching the report shape.
pub const EXTREME_COUNT: usize = 5;

/// Statistics of one comparison, before scope/contrast labels are attached.
#[derive(Debug, Clone)]
pub struct ComparisonStats {
    pub n1: usize,
    pub n2: usize,
    pub shapiro1: Option<ShapiroWilkTest>,
    pub shapiro2: Option<ShapiroWilkTest>,
    pub rank_sum: MannWhitneyTest,
    pub median1: f64,
    pub median2: f64,
    pub delta_median: f64,
    pub warnings: Vec<String>,
}

/// Compare two defined-indicator samples. Returns None when either sample is
/// below the configured minimum set size.
pub fn compare_sets(
    values1: &[f64],
    values2: &[f64],
    config: &StudyConfig,
) -> Result<Option<ComparisonStats>> {
    config.validate()?;
    if values1.len() < config.min_set_size || values2.len() < config.min_set_size {
        return Ok(None);
    }
    let mut warnings = Vec::new();
    let mut normality = |values: &[f64], side: u8| match stats::shapiro_wilk(values, config.seed) {
        Ok(test) => Some(test),
        Err(err) => {
            warnings.push(format!("normality pretest skipped for sample {side}: {err}"));
            None
        }
    };
    let shapiro1 = normality(values1, 1);
    let shapiro2 = normality(values2, 2);
    let rank_sum = stats::mann_whitney(values1, values2, config.alpha)?;
    let median1 = stats::median(values1)?;
    let median2 = stats::median(values2)?;
    Ok(Some(ComparisonStats {
        n1: values1.len(),
        n2: values2.len(),
        shapiro1,
        shapiro2,
        rank_sum,
        median1,
        median2,
        delta_median: median1 - median2,
        warnings,
    }))
}

enum Slot {
    Done(Comparison),
    Skipped(InsufficientData),
}

fn indicator_sample(
    indices: &[usize],
    values: &[Option<f64>],
) -> Vec<f64> {
    indices.iter().filter_map(|&i| values[i]).collect()
}

fn run_comparison(
    scope: &Scope,
    contrast: Contrast,
    indicator: Indicator,
    sample1: Vec<f64>,
    sample2: Vec<f64>,
    config: &StudyConfig,
) -> Result<Slot> {
    match compare_sets(&sample1, &sample2, config)? {
        Some(stats) => Ok(Slot::Done(Comparison {
            scope: scope.clone(),
            contrast,
            indicator,
            n1: stats.n1,
            n2: stats.n2,
            normality1: stats.shapiro1,
            normality2: stats.shapiro2,
            significant: stats.rank_sum.significant,
            rank_sum: stats.rank_sum,
            median1: stats.median1,
            median2: stats.median2,
            delta_median: stats.delta_median,
            warnings: stats.warnings,
        })),
        None => Ok(Slot::Skipped(InsufficientData {
            scope: scope.clone(),
            contrast,
            indicator,
            n1: sample1.len(),
            n2: sample2.len(),
        })),
    }
}

/// Run the complete study.
pub fn run_study(corpus: &Corpus, config: &StudyConfig) -> Result<StudyResult> {
    run_study_impl(corpus, config, true)
}

/// Sequential variant of [`run_study`].
pub fn run_study_seq(corpus: &Corpus, config: &StudyConfig) -> Result<StudyResult> {
    run_study_impl(corpus, config, false)
}

fn run_study_impl(corpus: &Corpus, config: &StudyConfig, parallel: bool) -> Result<StudyResult> {
    config.validate()?;
    let mut warnings = Vec::new();

    let pairs = match &config.pair_override {
        Some(list) => {
            let (profiles, mut pair_warnings) = pairing::profile_pairs(corpus, list);
            warnings.append(&mut pair_warnings);
            profiles
        }
        None => pairing::identify_pairs(corpus, config.threshold, config.min_first_count)?,
    };
    if pairs.is_empty() {
        warnings.push("no qualifying pairs; result is empty".into());
    }

    let baselines = indicators::compute_baselines(corpus);
    let scores = indicators::score_corpus_impl(corpus, &baselines, parallel);
    let aii: Vec<Option<f64>> = scores.iter().map(|s| s.aii).collect();
    let jii: Vec<Option<f64>> = scores.iter().map(|s| s.jii).collect();
    let values_for = |indicator: Indicator| -> &[Option<f64>] {
        match indicator {
            Indicator::Aii => &aii,
            Indicator::Jii => &jii,
        }
    };

    // pair scopes
    let pair_outputs: Vec<Result<(PublicationSets, Vec<Slot>)>> =
        exec::map_collect(&pairs, parallel, |pair| {
            let sets = partition::partition_pair(corpus, &pair.first_field, &pair.second_field)?;
            let scope = Scope::Pair {
                first: pair.first_field.clone(),
                second: pair.second_field.clone(),
            };
            let mut slots = Vec::new();
            for contrast in Contrast::PAIR_CONTRASTS {
                let counter = match contrast {
                    Contrast::Set1VsSet2 => &sets.set2,
                    _ => &sets.set3,
                };
                for &indicator in config.indicators.list() {
                    let values = values_for(indicator);
                    slots.push(run_comparison(
                        &scope,
                        contrast,
                        indicator,
                        indicator_sample(&sets.set1, values),
                        indicator_sample(counter, values),
                        config,
                    )?);
                }
            }
            Ok((sets, slots))
        });

    let mut pair_sets_full = Vec::with_capacity(pairs.len());
    let mut slots = Vec::new();
    for (pair, output) in pairs.iter().zip(pair_outputs) {
        let (sets, mut pair_slots) = output?;
        pair_sets_full.push((pair.clone(), sets));
        slots.append(&mut pair_slots);
    }

    // field scopes: distinct first fields, in pair order (already sorted)
    let mut first_fields: Vec<String> = pairs.iter().map(|p| p.first_field.clone()).collect();
    first_fields.dedup();
    let field_outputs: Vec<Result<(PublicationSets, Vec<Slot>)>> =
        exec::map_collect(&first_fields, parallel, |field| {
            let sets = partition::partition_field(corpus, field)?;
            let scope = Scope::Field {
                field: field.clone(),
            };
            let mut slots = Vec::new();
            for &indicator in config.indicators.list() {
                let values = values_for(indicator);
                slots.push(run_comparison(
                    &scope,
                    Contrast::Union12VsSet3,
                    indicator,
                    indicator_sample(&sets.union12, values),
                    indicator_sample(&sets.set3, values),
                    config,
                )?);
            }
            Ok((sets, slots))
        });

    let mut field_sets_full = Vec::with_capacity(first_fields.len());
    for (field, output) in first_fields.iter().zip(field_outputs) {
        let (sets, mut field_slots) = output?;
        field_sets_full.push((field.clone(), sets));
        slots.append(&mut field_slots);
    }

    let mut comparisons = Vec::new();
    let mut insufficient = Vec::new();
    for slot in slots {
        match slot {
            Slot::Done(c) => comparisons.push(c),
            Slot::Skipped(i) => insufficient.push(i),
        }
    }

    let pair_sets: Vec<PairSetRow> = pair_sets_full
        .iter()
        .map(|(pair, sets)| PairSetRow {
            first_field: pair.first_field.clone(),
            second_field: pair.second_field.clone(),
            counts: sets.counts(),
        })
        .collect();
    let field_sets: Vec<FieldSetRow> = field_sets_full
        .iter()
        .map(|(field, sets)| FieldSetRow {
            field: field.clone(),
            counts: sets.counts(),
        })
        .collect();

    let totals = StudyTotals {
        summed: partition::summed_totals(pair_sets_full.iter().map(|(_, s)| s)),
        dedup: partition::dedup_totals(pair_sets_full.iter().map(|(_, s)| s)),
    };

    let area_tables = area_tables(
        &pairs,
        &field_sets,
        &comparisons,
        config.indicators,
        corpus.scheme(),
    );
    let extremes = extract_extremes_from(&comparisons, config.indicators, EXTREME_COUNT);

    Ok(StudyResult {
        config: config.clone(),
        pairs,
        pair_sets,
        field_sets,
        comparisons,
        insufficient,
        area_tables,
        extremes,
        totals,
        warnings,
    })
}

/// Recompute the per-area summary tables of a study result.
pub fn aggregate_by_area(result: &StudyResult, scheme: &FieldScheme) -> Vec<AreaTable> {
    area_tables(
        &result.pairs,
        &result.field_sets,
        &result.comparisons,
        result.config.indicators,
        scheme,
    )
}

fn area_tables(
    pairs: &[PairProfile],
    field_sets: &[FieldSetRow],
    comparisons: &[Comparison],
    selection: IndicatorSelection,
    scheme: &FieldScheme,
) -> Vec<AreaTable> {
    let area_of = |field: &str| -> (String, String) {
        scheme
            .index_of(field)
            .map(|idx| {
                let entry = scheme.entry(idx);
                (entry.area_code.clone(), entry.area_name.clone())
            })
            .unwrap_or_else(|| ("?".into(), "unknown".into()))
    };

    [
        Contrast::Set1VsSet2,
        Contrast::Set1VsSet3,
        Contrast::Union12VsSet3,
    ]
    .into_iter()
    .map(|contrast| {
        // scope basis per area
        let mut rows: BTreeMap<String, AreaRow> = BTreeMap::new();
        let basis = |field: &str, rows: &mut BTreeMap<String, AreaRow>| {
            let (code, name) = area_of(field);
            let row = rows.entry(code.clone()).or_insert_with(|| AreaRow {
                area_code: code,
                area_name: name,
                scopes: 0,
                aii: selection.includes(Indicator::Aii).then(SigSplit::default),
                jii: selection.includes(Indicator::Jii).then(SigSplit::default),
            });
            row.scopes += 1;
        };
        match contrast {
            Contrast::Union12VsSet3 => {
                for row in field_sets {
                    basis(&row.field, &mut rows);
                }
            }
            _ => {
                for pair in pairs {
                    basis(&pair.first_field, &mut rows);
                }
            }
        }

        for comparison in comparisons {
            if comparison.contrast != contrast || !comparison.significant {
                continue;
            }
            let (code, _) = area_of(comparison.scope.first_field());
            let Some(row) = rows.get_mut(&code) else {
                continue;
            };
            let split = match comparison.indicator {
                Indicator::Aii => row.aii.as_mut(),
                Indicator::Jii => row.jii.as_mut(),
            };
            if let Some(split) = split {
                split.significant += 1;
                if comparison.delta_median > 0.0 {
                    split.positive += 1;
                } else {
                    split.negative += 1;
                }
            }
        }

        let mut total = AreaRow {
            area_code: "total".into(),
            area_name: "Total".into(),
            scopes: 0,
            aii: selection.includes(Indicator::Aii).then(SigSplit::default),
            jii: selection.includes(Indicator::Jii).then(SigSplit::default),
        };
        for row in rows.values() {
            total.scopes += row.scopes;
            for (sum, part) in [(&mut total.aii, &row.aii), (&mut total.jii, &row.jii)] {
                if let (Some(sum), Some(part)) = (sum.as_mut(), part.as_ref()) {
                    sum.significant += part.significant;
                    sum.positive += part.positive;
                    sum.negative += part.negative;
                }
            }
        }

        AreaTable {
            contrast,
            rows: rows.into_values().collect(),
            total,
        }
    })
    .collect()
}

/// The k largest and k smallest significant median differences per
/// contrast/indicator, with deterministic tie-breaking on the scope label.
pub fn extract_extremes(result: &StudyResult, k: usize) -> Vec<Extremes> {
    extract_extremes_from(&result.comparisons, result.config.indicators, k)
}

fn extract_extremes_from(
    comparisons: &[Comparison],
    selection: IndicatorSelection,
    k: usize,
) -> Vec<Extremes> {
    let mut tables = Vec::new();
    for contrast in [
        Contrast::Set1VsSet2,
        Contrast::Set1VsSet3,
        Contrast::Union12VsSet3,
    ] {
        for &indicator in selection.list() {
            let mut significant: Vec<&Comparison> = comparisons
                .iter()
                .filter(|c| c.contrast == contrast && c.indicator == indicator && c.significant)
                .collect();
            significant.sort_by(|a, b| {
                b.delta_median
                    .total_cmp(&a.delta_median)
                    .then_with(|| a.scope.label().cmp(&b.scope.label()))
            });
            let entry = |c: &Comparison| ExtremeEntry {
                scope: c.scope.clone(),
                delta_median: c.delta_median,
            };
            let top: Vec<ExtremeEntry> = significant.iter().take(k).map(|c| entry(c)).collect();
            // k smallest, presented descending toward the most negative
            let mut bottom: Vec<ExtremeEntry> = significant
                .iter()
                .rev()
                .take(k)
                .map(|c| entry(c))
                .collect();
            bottom.reverse();
            tables.push(Extremes {
                contrast,
                indicator,
                top,
                bottom,
            });
        }
    }
    tables
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthgen::{self, SynthConfig};

    #[test]
    fn identical_samples_compare_not_significant() {
        let values: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let config = StudyConfig::default();
        let stats = compare_sets(&values, &values, &config).unwrap().unwrap();
        assert!(!stats.rank_sum.significant);
        assert_eq!(stats.delta_median, 0.0);
    }

    #[test]
    fn small_sample_is_insufficient() {
        let small: Vec<f64> = vec![1.0, 2.0, 3.0, 4.0];
        let large: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let config = StudyConfig::default();
        assert!(compare_sets(&small, &large, &config).unwrap().is_none());
    }

    #[test]
    fn planted_shift_is_detected() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let base: Vec<f64> = (0..200).map(|_| rng.random::<f64>() * 2.0).collect();
        let shifted: Vec<f64> = base.iter().map(|x| x + 1.0).collect();
        let config = StudyConfig::default();
        let stats = compare_sets(&shifted, &base, &config).unwrap().unwrap();
        assert!(stats.rank_sum.significant);
        assert!(stats.delta_median > 0.0);
    }

    fn one_pair_corpus() -> crate::corpus::Corpus {
        let mut pair_collab = std::collections::BTreeMap::new();
        pair_collab.insert(
            (synthgen::field_code(0, 0), synthgen::field_code(0, 1)),
            0.3,
        );
        synthgen::generate(&SynthConfig {
            areas: 1,
            fields_per_area: 2,
            professors_per_field: 20,
            pubs_per_professor: 15.0,
            generic_collab_prob: 0.0,
            pair_collab,
            designated_pairs: Vec::new(),
            seed: 21,
            ..SynthConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn one_qualifying_pair_yields_six_slots() {
        // one pair -> 2 pair contrasts x 2 indicators + 1 field contrast x 2
        let corpus = one_pair_corpus();
        let config = StudyConfig {
            pair_override: Some(vec![(
                synthgen::field_code(0, 0),
                synthgen::field_code(0, 1),
            )]),
            min_set_size: 3,
            ..StudyConfig::default()
        };
        let result = run_study(&corpus, &config).unwrap();
        assert_eq!(result.pairs.len(), 1);
        assert_eq!(result.field_sets.len(), 1);
        assert_eq!(result.comparisons.len() + result.insufficient.len(), 6);
    }

    #[test]
    fn empty_corpus_yields_empty_result_with_warning() {
        let corpus = crate::pairing::tests::corpus_from_field_sets(&[]);
        let result = run_study(&corpus, &StudyConfig::default()).unwrap();
        assert!(result.pairs.is_empty());
        assert!(result.comparisons.is_empty());
        assert!(result
            .warnings
            .iter()
            .any(|w| w.contains("no qualifying pairs")));
    }

    #[test]
    fn comparison_slot_invariant() {
        let corpus = one_pair_corpus();
        let config = StudyConfig {
            min_first_count: 10,
            min_set_size: 3,
            ..StudyConfig::default()
        };
        let result = run_study(&corpus, &config).unwrap();
        let pairs = result.pairs.len();
        let fields = result.field_sets.len();
        assert_eq!(
            result.comparisons.len() + result.insufficient.len(),
            (2 * pairs + fields) * 2
        );
    }

    #[test]
    fn study_is_deterministic_across_modes() {
        let corpus = one_pair_corpus();
        let config = StudyConfig {
            min_first_count: 10,
            min_set_size: 5,
            ..StudyConfig::default()
        };
        let a = run_study(&corpus, &config).unwrap();
        let b = run_study_seq(&corpus, &config).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn pair_override_bypasses_threshold() {
        let corpus = one_pair_corpus();
        let config = StudyConfig {
            pair_override: Some(vec![
                (synthgen::field_code(0, 1), synthgen::field_code(0, 0)),
                ("NOPE".into(), synthgen::field_code(0, 0)),
            ]),
            min_set_size: 3,
            ..StudyConfig::default()
        };
        let result = run_study(&corpus, &config).unwrap();
        assert_eq!(result.pairs.len(), 1);
        assert_eq!(result.pairs[0].first_field, synthgen::field_code(0, 1));
        assert!(result.warnings.iter().any(|w| w.contains("NOPE")));
    }

    #[test]
    fn area_summary_counts_are_consistent() {
        let corpus = one_pair_corpus();
        let config = StudyConfig {
            min_first_count: 10,
            min_set_size: 3,
            ..StudyConfig::default()
        };
        let result = run_study(&corpus, &config).unwrap();
        for table in &result.area_tables {
            let mut scope_sum = 0;
            for row in &table.rows {
                scope_sum += row.scopes;
                for split in [&row.aii, &row.jii].into_iter().flatten() {
                    assert_eq!(split.positive + split.negative, split.significant);
                }
            }
            assert_eq!(scope_sum, table.total.scopes);
            // brute-force recount of significant comparisons per contrast
            for &indicator in result.config.indicators.list() {
                let brute = result
                    .comparisons
                    .iter()
                    .filter(|c| {
                        c.contrast == table.contrast
                            && c.indicator == indicator
                            && c.significant
                    })
                    .count() as u64;
                let total_split = match indicator {
                    Indicator::Aii => table.total.aii.as_ref(),
                    Indicator::Jii => table.total.jii.as_ref(),
                };
                assert_eq!(total_split.unwrap().significant, brute);
            }
        }
    }

    #[test]
    fn extremes_with_single_comparison_appear_in_both_lists() {
        let comparison = Comparison {
            scope: Scope::Pair {
                first: "A".into(),
                second: "B".into(),
            },
            contrast: Contrast::Set1VsSet2,
            indicator: Indicator::Aii,
            n1: 10,
            n2: 10,
            normality1: None,
            normality2: None,
            rank_sum: crate::stats::mann_whitney(
                &(0..10).map(f64::from).collect::<Vec<_>>(),
                &(5..15).map(f64::from).collect::<Vec<_>>(),
                0.9,
            )
            .unwrap(),
            median1: 1.5,
            median2: 1.0,
            delta_median: 0.5,
            significant: true,
            warnings: vec![],
        };
        let tables = extract_extremes_from(&[comparison], IndicatorSelection::Both, 5);
        let table = tables
            .iter()
            .find(|t| t.contrast == Contrast::Set1VsSet2 && t.indicator == Indicator::Aii)
            .unwrap();
        assert_eq!(table.top.len(), 1);
        assert_eq!(table.bottom.len(), 1);
        assert_eq!(table.top[0].delta_median, 0.5);
        assert_eq!(table.bottom[0].delta_median, 0.5);

        // no significant comparisons -> empty lists
        let empty = extract_extremes_from(&[], IndicatorSelection::Both, 5);
        assert!(empty.iter().all(|t| t.top.is_empty() && t.bottom.is_empty()));
    }

    #[test]
    fn extremes_match_brute_force_sort() {
        let corpus = one_pair_corpus();
        let config = StudyConfig {
            min_first_count: 10,
            min_set_size: 3,
            alpha: 0.9, // make most comparisons significant
            ..StudyConfig::default()
        };
        let result = run_study(&corpus, &config).unwrap();
        for table in &result.extremes {
            let mut deltas: Vec<f64> = result
                .comparisons
                .iter()
                .filter(|c| {
                    c.contrast == table.contrast
                        && c.indicator == table.indicator
                        && c.significant
                })
                .map(|c| c.delta_median)
                .collect();
            deltas.sort_by(f64::total_cmp);
            let top_brute: Vec<f64> = deltas.iter().rev().take(EXTREME_COUNT).copied().collect();
            let got_top: Vec<f64> = table.top.iter().map(|e| e.delta_median).collect();
            assert_eq!(got_top, top_brute);
            let bottom_brute: Vec<f64> = deltas
                .iter()
                .take(EXTREME_COUNT)
                .copied()
                .rev()
                .collect();
            let got_bottom: Vec<f64> = table.bottom.iter().map(|e| e.delta_median).collect();
            assert_eq!(got_bottom, bottom_brute);
        }
    }

    #[test]
    fn invalid_config_is_rejected() {
        let bad_alpha = StudyConfig {
            alpha: 1.5,
            ..StudyConfig::default()
        };
        assert!(bad_alpha.validate().is_err());
        let bad_min = StudyConfig {
            min_set_size: 2,
            ..StudyConfig::default()
        };
        assert!(bad_min.validate().is_err());
    }
}
