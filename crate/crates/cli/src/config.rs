//! Flat key=value configuration files and their merge with CLI flags.
//!
//! Precedence: built-in defaults, then the config file, then flags.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use idrstat::analysis::StudyConfig;
use idrstat::report::ReportFormats;
use idrstat::synthgen::SynthConfig;

/// Parsed key=value pairs. Lines starting with `#` and blank lines are
/// ignored; values keep everything after the first `=`.
#[derive(Debug, Clone, Default)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<ConfigFile> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut values = BTreeMap::new();
        for (number, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!(
                    "{}:{}: expected key=value, got `{line}`",
                    path.display(),
                    number + 1
                );
            };
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| anyhow::anyhow!("config key `{key}`: {e}")),
        }
    }
}

/// Effective study settings after merging defaults, config file, and flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub study: StudyConfig,
    pub formats: ReportFormats,
    pub pair_override_path: Option<PathBuf>,
    pub lenient: bool,
}

/// Flag-level overrides (every config key has a mirror flag).
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub threshold: Option<f64>,
    pub min_first_count: Option<u64>,
    pub alpha: Option<f64>,
    pub min_set_size: Option<usize>,
    pub seed: Option<u64>,
    pub formats: Option<String>,
    pub pairs_file: Option<PathBuf>,
    pub lenient: bool,
}

pub fn resolve_settings(file: &ConfigFile, flags: &Overrides) -> Result<Settings> {
    let mut study = StudyConfig::default();
    if let Some(v) = file.parse::<f64>("threshold")? {
        study.threshold = v;
    }
    if let Some(v) = file.parse::<u64>("min_first_count")? {
        study.min_first_count = v;
    }
    if let Some(v) = file.parse::<f64>("alpha")? {
        study.alpha = v;
    }
    if let Some(v) = file.parse::<usize>("min_set_size")? {
        study.min_set_size = v;
    }
    if let Some(v) = file.parse::<u64>("seed")? {
        study.seed = v;
    }
    let mut formats = match file.get("formats") {
        Some(spec) => ReportFormats::parse(spec)?,
        None => ReportFormats::default(),
    };
    let mut pair_override_path = file.get("pair_override_path").map(PathBuf::from);

    if let Some(v) = flags.threshold {
        study.threshold = v;
    }
    if let Some(v) = flags.min_first_count {
        study.min_first_count = v;
    }
    if let Some(v) = flags.alpha {
        study.alpha = v;
    }
    if let Some(v) = flags.min_set_size {
        study.min_set_size = v;
    }
    if let Some(v) = flags.seed {
        study.seed = v;
    }
    if let Some(spec) = &flags.formats {
        formats = ReportFormats::parse(spec)?;
    }
    if let Some(path) = &flags.pairs_file {
        pair_override_path = Some(path.clone());
    }
    study.validate()?;

    Ok(Settings {
        study,
        formats,
        pair_override_path,
        lenient: flags.lenient,
    })
}

/// Build a synthetic-corpus configuration from `synth_*` config keys plus an
/// optional seed flag.
pub fn resolve_synth(file: &ConfigFile, seed_flag: Option<u64>) -> Result<SynthConfig> {
    let mut synth = SynthConfig::default();
    if let Some(v) = file.parse::<u32>("synth_areas")? {
        synth.areas = v;
    }
    if let Some(v) = file.parse::<u32>("synth_fields_per_area")? {
        synth.fields_per_area = v;
    }
    if let Some(v) = file.parse::<u32>("synth_professors_per_field")? {
        synth.professors_per_field = v;
    }
    if let Some(v) = file.parse::<f64>("synth_pubs_per_professor")? {
        synth.pubs_per_professor = v;
    }
    if let Some(v) = file.parse::<f64>("synth_within_field_team_prob")? {
        synth.within_field_team_prob = v;
    }
    if let Some(v) = file.parse::<f64>("synth_generic_collab_prob")? {
        synth.generic_collab_prob = v;
    }
    if let Some(v) = file.parse::<f64>("synth_citation_log_mean")? {
        synth.citation_log_mean = v;
    }
    if let Some(v) = file.parse::<f64>("synth_citation_log_sd")? {
        synth.citation_log_sd = v;
    }
    if let Some(v) = file.parse::<u32>("synth_journals_per_category")? {
        synth.journals_per_category = v;
    }
    if let Some(v) = file.parse::<f64>("synth_if_log_mean")? {
        synth.if_log_mean = v;
    }
    if let Some(v) = file.parse::<f64>("synth_if_log_sd")? {
        synth.if_log_sd = v;
    }
    if let Some(v) = file.parse::<f64>("synth_multi_category_prob")? {
        synth.multi_category_prob = v;
    }
    if let Some(raw) = file.get("synth_years") {
        synth.years = parse_years(raw)?;
    }
    if let Some(v) = file.parse::<f64>("synth_planted_shift")? {
        synth.planted_shift = v;
    }
    if let Some(raw) = file.get("synth_pair_collab") {
        synth.pair_collab = parse_pair_probs(raw)?;
    }
    if let Some(raw) = file.get("synth_designated_pairs") {
        synth.designated_pairs = parse_pairs(raw)?;
    }
    if let Some(v) = file.parse::<u64>("seed")? {
        synth.seed = v;
    }
    if let Some(v) = seed_flag {
        synth.seed = v;
    }
    Ok(synth)
}

fn parse_years(raw: &str) -> Result<(i32, i32)> {
    let Some((lo, hi)) = raw.split_once('-') else {
        bail!("synth_years must look like 2004-2008, got `{raw}`");
    };
    Ok((lo.trim().parse()?, hi.trim().parse()?))
}

/// `A>B,C>D` pair list.
fn parse_pairs(raw: &str) -> Result<Vec<(String, String)>> {
    raw.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|token| {
            let Some((a, b)) = token.split_once('>') else {
                bail!("expected FIRST>SECOND, got `{token}`");
            };
            Ok((a.trim().to_string(), b.trim().to_string()))
        })
        .collect()
}

/// `A>B:0.2,C>D:0.15` collaboration matrix.
fn parse_pair_probs(raw: &str) -> Result<BTreeMap<(String, String), f64>> {
    let mut matrix = BTreeMap::new();
    for token in raw.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let Some((pair, prob)) = token.rsplit_once(':') else {
            bail!("expected FIRST>SECOND:PROB, got `{token}`");
        };
        let Some((a, b)) = pair.split_once('>') else {
            bail!("expected FIRST>SECOND:PROB, got `{token}`");
        };
        matrix.insert(
            (a.trim().to_string(), b.trim().to_string()),
            prob.trim().parse::<f64>()?,
        );
    }
    Ok(matrix)
}

/// Read an optional pairs.csv override (header `first_field,second_field`).
pub fn read_pairs_file(path: &Path) -> Result<Vec<(String, String)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read pairs file {}", path.display()))?;
    let mut pairs = Vec::new();
    for record in reader.records() {
        let record = record?;
        if record.len() < 2 {
            bail!("{}: each row needs first_field,second_field", path.display());
        }
        pairs.push((record[0].to_string(), record[1].to_string()));
    }
    Ok(pairs)
}
