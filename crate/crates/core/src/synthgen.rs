//! Seeded synthetic corpus generation with controllable field structure,
//! collaboration rates, citation and impact-factor distributions, and a
//! plantable multiplicative citation shift for designated field pairs.
//!
//! Generation is deterministic for a given configuration: every professor
//! and every journal draws from its own seed-derived substream, so the
//! output does not depend on the worker count.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, LogNormal, Poisson};
use serde::{Deserialize, Serialize};

use crate::corpus::{
    Author, Corpus, FieldEntry, FieldScheme, JournalYearRow, LoadOptions, Provenance,
    RawPublication,
};
use crate::error::{Error, Result};
use crate::exec;

/// Generator configuration. All probabilities are per publication.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthConfig {
    pub areas: u32,
    pub fields_per_area: u32,
    pub professors_per_field: u32,
    /// Poisson mean of publications per professor.
    pub pubs_per_professor: f64,
    /// Probability of adding a same-field co-author.
    pub within_field_team_prob: f64,
    /// Probability of adding a co-author from a uniformly chosen field
    /// outside the collaboration matrix.
    pub generic_collab_prob: f64,
    /// Ordered (first, second) field pairs and the probability that a
    /// publication led by the first field includes a second-field co-author.
    #[serde(with = "pair_collab_entries")]
    pub pair_collab: BTreeMap<(String, String), f64>,
    /// Log-normal citation model, one parameter set per stratum.
    pub citation_log_mean: f64,
    pub citation_log_sd: f64,
    pub journals_per_category: u32,
    pub if_log_mean: f64,
    pub if_log_sd: f64,
    /// Probability that a journal carries a second category.
    pub multi_category_prob: f64,
    /// Inclusive year range.
    pub years: (i32, i32),
    /// Multiplicative citation boost for publications that will classify as
    /// Set 1 of a designated pair (applied before rounding).
    pub planted_shift: f64,
    pub designated_pairs: Vec<(String, String)>,
    pub seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        let mut pair_collab = BTreeMap::new();
        pair_collab.insert((field_code(0, 0), field_code(0, 1)), 0.18);
        pair_collab.insert((field_code(0, 1), field_code(0, 2)), 0.12);
        pair_collab.insert((field_code(1, 0), field_code(1, 1)), 0.15);
        SynthConfig {
            areas: 2,
            fields_per_area: 3,
            professors_per_field: 25,
            pubs_per_professor: 8.0,
            within_field_team_prob: 0.5,
            generic_collab_prob: 0.08,
            pair_collab,
            citation_log_mean: 2.0,
            citation_log_sd: 0.9,
            journals_per_category: 6,
            if_log_mean: 0.7,
            if_log_sd: 0.5,
            multi_category_prob: 0.15,
            years: (2004, 2008),
            planted_shift: 1.0,
            designated_pairs: Vec::new(),
            seed: 42,
        }
    }
}

/// JSON-friendly form of the collaboration matrix: a list of
/// (first, second, probability) entries instead of a tuple-keyed map.
mod pair_collab_entries {
    use std::collections::BTreeMap;

    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<(String, String), f64>,
        serializer: S,
    ) -> Result<S::Ok, S::Error> {
        let entries: Vec<(&String, &String, f64)> =
            map.iter().map(|((a, b), &p)| (a, b, p)).collect();
        entries.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<BTreeMap<(String, String), f64>, D::Error> {
        let entries: Vec<(String, String, f64)> = Vec::deserialize(deserializer)?;
        Ok(entries.into_iter().map(|(a, b, p)| ((a, b), p)).collect())
    }
}

/// Canonical generated field code for (area, field-within-area), 0-based.
pub fn field_code(area: u32, field: u32) -> String {
    format!("F{}.{}", area + 1, field + 1)
}

/// Canonical generated area code, 0-based.
pub fn area_code(area: u32) -> String {
    format!("A{}", area + 1)
}

/// Canonical generated category code: one category per area.
pub fn category_code(area: u32) -> String {
    format!("C{}", area + 1)
}

impl SynthConfig {
    pub fn validate(&self) -> Result<()> {
        let check_count = |name: &str, v: u32| {
            if v == 0 {
                Err(Error::InvalidConfig(format!("{name} must be positive")))
            } else {
                Ok(())
            }
        };
        check_count("areas", self.areas)?;
        check_count("fields_per_area", self.fields_per_area)?;
        check_count("professors_per_field", self.professors_per_field)?;
        check_count("journals_per_category", self.journals_per_category)?;
        let check_prob = |name: &str, v: f64| {
            if !(0.0..=1.0).contains(&v) {
                Err(Error::InvalidConfig(format!(
                    "{name} must be in [0, 1], got {v}"
                )))
            } else {
                Ok(())
            }
        };
        check_prob("within_field_team_prob", self.within_field_team_prob)?;
        check_prob("generic_collab_prob", self.generic_collab_prob)?;
        check_prob("multi_category_prob", self.multi_category_prob)?;
        for ((first, second), prob) in &self.pair_collab {
            check_prob(&format!("pair_collab[{first}>{second}]"), *prob)?;
            if first == second {
                return Err(Error::InvalidConfig(format!(
                    "pair_collab pair ({first}, {second}) must have distinct fields"
                )));
            }
        }
        if !(self.pubs_per_professor > 0.0) {
            return Err(Error::InvalidConfig(
                "pubs_per_professor must be positive".into(),
            ));
        }
        if !(self.planted_shift > 0.0) {
            return Err(Error::InvalidConfig("planted_shift must be positive".into()));
        }
        if !self.citation_log_sd.is_finite() || self.citation_log_sd < 0.0 {
            return Err(Error::InvalidConfig(
                "citation_log_sd must be nonnegative".into(),
            ));
        }
        if !self.if_log_sd.is_finite() || self.if_log_sd < 0.0 {
            return Err(Error::InvalidConfig("if_log_sd must be nonnegative".into()));
        }
        if self.years.0 > self.years.1 {
            return Err(Error::InvalidConfig(format!(
                "years range {}-{} is empty",
                self.years.0, self.years.1
            )));
        }
        let field_count = self.areas as u64 * self.fields_per_area as u64;
        for pair in self.pair_collab.keys().chain(self.designated_pairs.iter()) {
            for code in [&pair.0, &pair.1] {
                if !self.is_generated_code(code) {
                    return Err(Error::InvalidConfig(format!(
                        "pair field `{code}` is not one of the {field_count} generated fields"
                    )));
                }
            }
        }
        Ok(())
    }

    fn is_generated_code(&self, code: &str) -> bool {
        for area in 0..self.areas {
            for field in 0..self.fields_per_area {
                if field_code(area, field) == code {
                    return true;
                }
            }
        }
        false
    }

    /// Planted ground truth: the designated pairs and the expected
    /// multiplicative AII median shift (the boost itself, since medians of
    /// log-normals scale multiplicatively).
    pub fn ground_truth(&self) -> GroundTruth {
        GroundTruth {
            seed: self.seed,
            planted_shift: self.planted_shift,
            designated_pairs: self.designated_pairs.clone(),
            expected_aii_median_ratio: self.planted_shift,
            config: self.clone(),
        }
    }
}

/// Planted parameters, written alongside generated corpora.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruth {
    pub seed: u64,
    pub planted_shift: f64,
    pub designated_pairs: Vec<(String, String)>,
    /// True multiplicative shift of the Set 1 AII median, in expectation.
    pub expected_aii_median_ratio: f64,
    pub config: SynthConfig,
}

/// Generate a corpus from the configuration.
pub fn generate(config: &SynthConfig) -> Result<Corpus> {
    generate_impl(config, true)
}

/// Sequential variant of [`generate`].
pub fn generate_seq(config: &SynthConfig) -> Result<Corpus> {
    generate_impl(config, false)
}

/// Stable substream derivation (SplitMix64 finalizer over seed/domain/index).
fn substream(seed: u64, domain: u64, index: u64) -> ChaCha8Rng {
    let mut z = seed
        ^ domain.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ index.wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    ChaCha8Rng::seed_from_u64(z)
}

fn generate_impl(config: &SynthConfig, parallel: bool) -> Result<Corpus> {
    config.validate()?;

    let field_count = (config.areas * config.fields_per_area) as usize;
    let mut entries = Vec::with_capacity(field_count);
    for area in 0..config.areas {
        for field in 0..config.fields_per_area {
            entries.push(FieldEntry {
                code: field_code(area, field),
                name: format!("Synthetic field {}.{}", area + 1, field + 1),
                area_code: area_code(area),
                area_name: format!("Synthetic area {}", area + 1),
            });
        }
    }
    let scheme = FieldScheme::new(entries)?;

    // professors: contiguous ids grouped by field
    let per_field = config.professors_per_field as usize;
    let professor_field = |professor: usize| professor / per_field;
    let professor_id = |professor: usize| format!("P{professor:06}");
    let professor_count = field_count * per_field;
    let authors: Vec<Author> = (0..professor_count)
        .map(|p| {
            let field = professor_field(p);
            let area = field as u32 / config.fields_per_area;
            let within = field as u32 % config.fields_per_area;
            Author {
                id: professor_id(p),
                field_code: field_code(area, within),
            }
        })
        .collect();

    // journals: per category (one category per area), IF per year
    let (year_lo, year_hi) = config.years;
    let mut journal_rows = Vec::new();
    let mut journals_by_area: Vec<Vec<String>> = vec![Vec::new(); config.areas as usize];
    let if_dist = LogNormal::new(config.if_log_mean, config.if_log_sd)
        .map_err(|e| Error::InvalidConfig(format!("impact factor distribution: {e}")))?;
    for area in 0..config.areas {
        for j in 0..config.journals_per_category {
            let journal_idx = area * config.journals_per_category + j;
            let journal_id = format!("J{journal_idx:04}");
            let mut rng = substream(config.seed, 1, journal_idx as u64);
            let mut categories = vec![category_code(area)];
            if config.areas > 1 && rng.random::<f64>() < config.multi_category_prob {
                categories.push(category_code((area + 1) % config.areas));
            }
            for year in year_lo..=year_hi {
                journal_rows.push(JournalYearRow {
                    journal_id: journal_id.clone(),
                    year,
                    impact_factor: Some(if_dist.sample(&mut rng)),
                    categories: categories.clone(),
                });
            }
            journals_by_area[area as usize].push(journal_id);
        }
    }

    // resolve the collaboration matrix to field indices, grouped by first
    let scheme_index = |code: &str| scheme.index_of(code).expect("validated field code");
    let mut collab_by_first: Vec<Vec<(usize, f64)>> = vec![Vec::new(); field_count];
    for ((first, second), prob) in &config.pair_collab {
        collab_by_first[scheme_index(first)].push((scheme_index(second), *prob));
    }
    let designated: Vec<(usize, usize)> = config
        .designated_pairs
        .iter()
        .map(|(a, b)| (scheme_index(a), scheme_index(b)))
        .collect();

    // fields eligible for generic collaboration, per lead field
    let generic_targets: Vec<Vec<usize>> = (0..field_count)
        .map(|lead| {
            (0..field_count)
                .filter(|&f| f != lead && !collab_by_first[lead].iter().any(|&(s, _)| s == f))
                .collect()
        })
        .collect();

    let pubs_dist = Poisson::new(config.pubs_per_professor)
        .map_err(|e| Error::InvalidConfig(format!("publications per professor: {e}")))?;
    let citation_dist = LogNormal::new(config.citation_log_mean, config.citation_log_sd)
        .map_err(|e| Error::InvalidConfig(format!("citation distribution: {e}")))?;

    let per_professor: Vec<Vec<RawPublication>> =
        exec::map_range(professor_count, parallel, |professor| {
            let mut rng = substream(config.seed, 2, professor as u64);
            let lead_field = professor_field(professor);
            let lead_area = (lead_field as u32 / config.fields_per_area) as usize;
            let n_pubs = pubs_dist.sample(&mut rng) as usize;
            let mut pubs = Vec::with_capacity(n_pubs);
            for k in 0..n_pubs {
                let mut author_ids = vec![professor_id(professor)];
                let mut fields = vec![lead_field];

                if per_field > 1 && rng.random::<f64>() < config.within_field_team_prob {
                    // another professor of the same field
                    let offset = 1 + rng.random_range(0..per_field - 1);
                    let colleague = lead_field * per_field + (professor % per_field + offset) % per_field;
                    author_ids.push(professor_id(colleague));
                }
                for &(second, prob) in &collab_by_first[lead_field] {
                    if rng.random::<f64>() < prob {
                        let pick = rng.random_range(0..per_field);
                        author_ids.push(professor_id(second * per_field + pick));
                        fields.push(second);
                    }
                }
                if !generic_targets[lead_field].is_empty()
                    && rng.random::<f64>() < config.generic_collab_prob
                {
                    let target = generic_targets[lead_field]
                        [rng.random_range(0..generic_targets[lead_field].len())];
                    let pick = rng.random_range(0..per_field);
                    author_ids.push(professor_id(target * per_field + pick));
                    fields.push(target);
                }

                let year = rng.random_range(year_lo..=year_hi);
                let journals = &journals_by_area[lead_area];
                let journal_id = journals[rng.random_range(0..journals.len())].clone();

                let boosted = designated
                    .iter()
                    .any(|&(a, b)| fields.contains(&a) && fields.contains(&b));
                let mut citations = citation_dist.sample(&mut rng);
                if boosted {
                    citations *= config.planted_shift;
                }

                pubs.push(RawPublication {
                    id: format!("PB{professor:06}-{k:03}"),
                    year,
                    journal_id,
                    citations: citations.round().max(0.0) as u64,
                    author_ids,
                    categories: Vec::new(),
                });
            }
            pubs
        });

    let raw_pubs: Vec<RawPublication> = per_professor.into_iter().flatten().collect();

    let (corpus, report) = Corpus::assemble(
        scheme,
        authors,
        journal_rows,
        raw_pubs,
        &LoadOptions::default(),
        Provenance {
            source_paths: Vec::new(),
            loaded_at: std::time::SystemTime::now(),
        },
    )?;
    debug_assert!(report.warnings.is_empty());
    Ok(corpus)
}

/// Write `ground_truth.json` for a configuration.
pub fn write_ground_truth(path: &Path, config: &SynthConfig) -> Result<()> {
    let json = serde_json::to_string_pretty(&config.ground_truth())?;
    std::fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
}
