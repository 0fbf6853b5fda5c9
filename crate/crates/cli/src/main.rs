//! Command-line frontend for the interdisciplinarity impact pipeline.
//!
//! Exit codes: 0 success, 1 validation failure, 2 i/o failure, 3 bad
//! arguments or configuration.

mod config;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use idrstat::analysis::{self, StudyResult};
use idrstat::corpus::{self, Corpus, CorpusPaths, LoadMode, LoadOptions};
use idrstat::indicators;
use idrstat::pairing;
use idrstat::partition;
use idrstat::report;
use idrstat::synthgen;

use config::{ConfigFile, Overrides, Settings};

#[derive(Parser)]
#[command(
    name = "idrstat",
    version,
    about = "Interdisciplinarity impact analysis over a classified publication corpus"
)]
struct Cli {
    /// Worker threads for parallel stages (default: machine parallelism).
    /// Results are identical for any worker count.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load the corpus and print a validation report
    Validate(CommonArgs),
    /// Identify qualifying field pairs and write pairs.csv
    Pairs(CommonArgs),
    /// Partition publications into sets per pair and per first field
    Partition(CommonArgs),
    /// Compute per-publication impact indicators
    Indicators(CommonArgs),
    /// Run all set comparisons and write study.json
    Compare(CommonArgs),
    /// Render report tables (reuses study.json when present)
    Report(CommonArgs),
    /// Generate a seeded synthetic corpus
    Synth(SynthArgs),
    /// load -> pairs -> partition -> indicators -> compare -> report
    RunAll(CommonArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Directory holding fields.csv, authors.csv, journals.csv,
    /// publications.csv
    #[arg(long)]
    input: PathBuf,
    /// Output directory (created if missing)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Flat key=value configuration file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Specific-degree threshold for qualifying pairs (default 0.10)
    #[arg(long)]
    threshold: Option<f64>,
    /// Minimum first-field publication count (default 100)
    #[arg(long = "min-pubs")]
    min_pubs: Option<u64>,
    /// Significance level (default 0.05)
    #[arg(long)]
    alpha: Option<f64>,
    /// Minimum per-set sample size for a comparison (default 10)
    #[arg(long = "min-set-size")]
    min_set_size: Option<usize>,
    /// External pair list (first_field,second_field), bypassing
    /// identification
    #[arg(long = "pairs-file")]
    pairs_file: Option<PathBuf>,
    /// Seed for normality-test subsampling (and synth)
    #[arg(long)]
    seed: Option<u64>,
    /// Output formats, comma separated: csv,md,json (default all)
    #[arg(long)]
    format: Option<String>,
    /// Drop rows with dangling references instead of failing
    #[arg(long)]
    lenient: bool,
}

#[derive(Args, Clone)]
struct SynthArgs {
    /// Output directory for the generated corpus (created if missing)
    #[arg(long)]
    output: PathBuf,
    /// Flat key=value configuration file (synth_* keys)
    #[arg(long)]
    config: Option<PathBuf>,
    /// Generator seed (overrides the config file)
    #[arg(long)]
    seed: Option<u64>,
}

/// Failure classified by exit code.
enum Failure {
    Validation(anyhow::Error),
    Io(anyhow::Error),
    Args(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Io(_) => 2,
            Failure::Args(_) => 3,
        }
    }

    fn error(&self) -> &anyhow::Error {
        match self {
            Failure::Validation(e) | Failure::Io(e) | Failure::Args(e) => e,
        }
    }
}

fn classify_core(err: idrstat::Error) -> Failure {
    use idrstat::Error::*;
    match err {
        Io { .. } => Failure::Io(anyhow!(err)),
        Csv { .. } => Failure::Io(anyhow!(err)),
        InvalidConfig(_) => Failure::Args(anyhow!(err)),
        _ => Failure::Validation(anyhow!(err)),
    }
}

type CmdResult<T> = Result<T, Failure>;

trait IntoCmd<T> {
    fn or_validation(self) -> CmdResult<T>;
    fn or_io(self) -> CmdResult<T>;
    fn or_args(self) -> CmdResult<T>;
}

impl<T> IntoCmd<T> for anyhow::Result<T> {
    fn or_validation(self) -> CmdResult<T> {
        self.map_err(Failure::Validation)
    }
    fn or_io(self) -> CmdResult<T> {
        self.map_err(Failure::Io)
    }
    fn or_args(self) -> CmdResult<T> {
        self.map_err(Failure::Args)
    }
}

impl<T> IntoCmd<T> for idrstat::Result<T> {
    fn or_validation(self) -> CmdResult<T> {
        self.map_err(classify_core)
    }
    fn or_io(self) -> CmdResult<T> {
        self.map_err(|e| Failure::Io(anyhow!(e)))
    }
    fn or_args(self) -> CmdResult<T> {
        self.map_err(|e| Failure::Args(anyhow!(e)))
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let ok = matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if ok { ExitCode::SUCCESS } else { ExitCode::from(3) };
        }
    };

    let workers = cli.workers;
    match with_workers(workers, || execute(cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {:#}", failure.error());
            ExitCode::from(failure.code())
        }
    }
}

#[cfg(feature = "parallel")]
fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .expect("worker pool")
            .install(f),
        None => f(),
    }
}

#[cfg(not(feature = "parallel"))]
fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    if workers.is_some_and(|w| w > 1) {
        eprintln!("note: built without the `parallel` feature; running sequentially");
    }
    f()
}

fn execute(cli: Cli) -> CmdResult<()> {
    match cli.command {
        Command::Validate(args) => cmd_validate(&args),
        Command::Pairs(args) => {
            let (context, _) = StageContext::prepare(&args)?;
            context.stage_pairs().map(|_| ())
        }
        Command::Partition(args) => {
            let (context, _) = StageContext::prepare(&args)?;
            let pairs = context.stage_pairs()?;
            context.stage_partition(&pairs).map(|_| ())
        }
        Command::Indicators(args) => {
            let (context, _) = StageContext::prepare(&args)?;
            context.stage_indicators().map(|_| ())
        }
        Command::Compare(args) => {
            let (context, _) = StageContext::prepare(&args)?;
            context.stage_compare().map(|_| ())
        }
        Command::Report(args) => {
            let (context, _) = StageContext::prepare(&args)?;
            let study = match context.existing_study()? {
                Some(study) => study,
                None => context.stage_compare()?,
            };
            context.stage_report(&study)
        }
        Command::Synth(args) => cmd_synth(&args),
        Command::RunAll(args) => {
            let (context, load_warnings) = StageContext::prepare(&args)?;
            println!(
                "load: {} publications, {} authors, {} journals, {} fields ({} warnings)",
                context.corpus.publications().len(),
                context.corpus.author_count(),
                context.corpus.journals().len(),
                context.corpus.scheme().len(),
                load_warnings,
            );
            let pairs = context.stage_pairs()?;
            context.stage_partition(&pairs)?;
            context.stage_indicators()?;
            let study = context.stage_compare()?;
            context.stage_report(&study)
        }
    }
}

/// A loaded corpus plus resolved settings and output directory.
struct StageContext {
    corpus: Corpus,
    settings: Settings,
    output: PathBuf,
}

impl StageContext {
    fn prepare(args: &CommonArgs) -> CmdResult<(StageContext, usize)> {
        let settings = resolve(args)?;
        let (corpus, report) = load_corpus(&args.input, &settings)?;
        let output = args
            .output
            .clone()
            .ok_or_else(|| Failure::Args(anyhow!("--output is required for this command")))?;
        std::fs::create_dir_all(&output)
            .with_context(|| format!("cannot create output directory {}", output.display()))
            .or_io()?;
        for warning in &report.warnings {
            eprintln!("warning: {warning}");
        }
        let warnings = report.warnings.len();
        Ok((
            StageContext {
                corpus,
                settings,
                output,
            },
            warnings,
        ))
    }

    fn study_config(&self) -> CmdResult<analysis::StudyConfig> {
        let mut study = self.settings.study.clone();
        if let Some(path) = &self.settings.pair_override_path {
            let pairs = config::read_pairs_file(path).or_args()?;
            study.pair_override = Some(pairs);
        }
        Ok(study)
    }

    fn stage_pairs(&self) -> CmdResult<Vec<pairing::PairProfile>> {
        let study = self.study_config()?;
        let pairs = match &study.pair_override {
            Some(list) => {
                let (profiles, warnings) = pairing::profile_pairs(&self.corpus, list);
                for warning in &warnings {
                    eprintln!("warning: {warning}");
                }
                profiles
            }
            None => {
                pairing::identify_pairs(&self.corpus, study.threshold, study.min_first_count)
                    .or_args()?
            }
        };
        let path = self.output.join("pairs.csv");
        let mut writer = csv::Writer::from_path(&path)
            .with_context(|| format!("cannot write {}", path.display()))
            .or_io()?;
        (|| -> csv::Result<()> {
            writer.write_record([
                "first_field",
                "second_field",
                "co_count",
                "first_count",
                "degree",
            ])?;
            for pair in &pairs {
                writer.write_record([
                    pair.first_field.as_str(),
                    pair.second_field.as_str(),
                    &pair.co_count.to_string(),
                    &pair.first_count.to_string(),
                    &format!("{}", pair.degree),
                ])?;
            }
            Ok(())
        })()
        .with_context(|| format!("cannot write {}", path.display()))
        .or_io()?;
        println!(
            "pairs: {} qualifying pairs (threshold {}, min first-field pubs {}) -> {}",
            pairs.len(),
            self.settings.study.threshold,
            self.settings.study.min_first_count,
            path.display()
        );
        Ok(pairs)
    }

    fn stage_partition(&self, pairs: &[pairing::PairProfile]) -> CmdResult<()> {
        let path = self.output.join("sets.csv");
        let mut writer = csv::Writer::from_path(&path)
            .with_context(|| format!("cannot write {}", path.display()))
            .or_io()?;
        let mut first_fields: Vec<&str> = pairs.iter().map(|p| p.first_field.as_str()).collect();
        first_fields.dedup();
        writer
            .write_record([
                "scope", "first_field", "second_field", "set1", "set2", "set3", "union12",
                "total",
            ])
            .with_context(|| format!("cannot write {}", path.display()))
            .or_io()?;
        let mut row = |scope: &str,
                       first: &str,
                       second: &str,
                       counts: &partition::SetCounts|
         -> CmdResult<()> {
            writer
                .write_record([
                    scope,
                    first,
                    second,
                    &counts.set1.to_string(),
                    &counts.set2.to_string(),
                    &counts.set3.to_string(),
                    &counts.union12.to_string(),
                    &counts.total.to_string(),
                ])
                .with_context(|| format!("cannot write {}", path.display()))
                .or_io()
        };
        for pair in pairs {
            let sets =
                partition::partition_pair(&self.corpus, &pair.first_field, &pair.second_field)
                    .or_validation()?;
            row("pair", &pair.first_field, &pair.second_field, &sets.counts())?;
        }
        for field in &first_fields {
            let sets = partition::partition_field(&self.corpus, field).or_validation()?;
            row("field", field, "", &sets.counts())?;
        }
        println!(
            "partition: {} pairs + {} first fields -> {}",
            pairs.len(),
            first_fields.len(),
            path.display()
        );
        Ok(())
    }

    fn stage_indicators(&self) -> CmdResult<Vec<indicators::IndicatorScore>> {
        let baselines = indicators::compute_baselines(&self.corpus);
        let scores = indicators::score_corpus(&self.corpus, &baselines);
        let path = self.output.join("indicators.csv");
        indicators::write_indicators_csv(&path, &scores).or_io()?;
        let defined_aii = scores.iter().filter(|s| s.aii.is_some()).count();
        let defined_jii = scores.iter().filter(|s| s.jii.is_some()).count();
        println!(
            "indicators: {}/{} AII, {}/{} JII defined -> {}",
            defined_aii,
            scores.len(),
            defined_jii,
            scores.len(),
            path.display()
        );
        Ok(scores)
    }

    fn stage_compare(&self) -> CmdResult<StudyResult> {
        let study_config = self.study_config()?;
        let study = analysis::run_study(&self.corpus, &study_config).or_validation()?;
        for warning in &study.warnings {
            eprintln!("warning: {warning}");
        }
        let path = self.output.join("study.json");
        let json = serde_json::to_string_pretty(&study)
            .context("cannot serialize study result")
            .or_io()?;
        std::fs::write(&path, json + "\n")
            .with_context(|| format!("cannot write {}", path.display()))
            .or_io()?;
        let significant = study.comparisons.iter().filter(|c| c.significant).count();
        println!(
            "compare: {} comparisons, {} significant, {} insufficient -> {}",
            study.comparisons.len(),
            significant,
            study.insufficient.len(),
            path.display()
        );
        Ok(study)
    }

    fn existing_study(&self) -> CmdResult<Option<StudyResult>> {
        let path = self.output.join("study.json");
        if !path.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(&path)
            .with_context(|| format!("cannot read {}", path.display()))
            .or_io()?;
        let study = serde_json::from_str(&text)
            .with_context(|| format!("cannot parse {}", path.display()))
            .or_validation()?;
        Ok(Some(study))
    }

    fn stage_report(&self, study: &StudyResult) -> CmdResult<()> {
        let written =
            report::render_report(study, &self.output, &self.settings.formats).or_io()?;
        println!(
            "report: {} files -> {}",
            written.len(),
            self.output.display()
        );
        Ok(())
    }
}

fn resolve(args: &CommonArgs) -> CmdResult<Settings> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path).or_args()?,
        None => ConfigFile::default(),
    };
    let flags = Overrides {
        threshold: args.threshold,
        min_first_count: args.min_pubs,
        alpha: args.alpha,
        min_set_size: args.min_set_size,
        seed: args.seed,
        formats: args.format.clone(),
        pairs_file: args.pairs_file.clone(),
        lenient: args.lenient,
    };
    config::resolve_settings(&file, &flags).or_args()
}

fn load_corpus(
    input: &Path,
    settings: &Settings,
) -> CmdResult<(Corpus, corpus::LoadReport)> {
    let paths = CorpusPaths::in_dir(input);
    for path in [&paths.fields, &paths.authors, &paths.journals, &paths.publications] {
        if !path.exists() {
            return Err(Failure::Io(anyhow!("missing input file {}", path.display())));
        }
    }
    let options = LoadOptions {
        mode: if settings.lenient {
            LoadMode::Lenient
        } else {
            LoadMode::Strict
        },
    };
    corpus::load_corpus(&paths, &options).or_validation()
}

fn cmd_validate(args: &CommonArgs) -> CmdResult<()> {
    let settings = resolve(args)?;
    let (corpus, load_report) = load_corpus(&args.input, &settings)?;
    let report = corpus::validate(&corpus);
    println!(
        "validate: {} publications, {} authors, {} fields, {} journals",
        report.publications, report.authors, report.fields, report.journals
    );
    println!(
        "  flags: {} empty-category, {} no-classified-author, {} missing-impact-factor, {} single-classified-author",
        report.empty_categories.len(),
        report.no_classified_authors.len(),
        report.missing_impact_factor.len(),
        report.single_classified_author
    );
    if !load_report.warnings.is_empty() {
        println!("  load warnings: {}", load_report.warnings.len());
    }
    if let Some(output) = &args.output {
        std::fs::create_dir_all(output)
            .with_context(|| format!("cannot create output directory {}", output.display()))
            .or_io()?;
        let path = output.join("validation.json");
        let json = serde_json::to_string_pretty(&report)
            .context("cannot serialize validation report")
            .or_io()?;
        std::fs::write(&path, json + "\n")
            .with_context(|| format!("cannot write {}", path.display()))
            .or_io()?;
        println!("  -> {}", path.display());
    }
    Ok(())
}

fn cmd_synth(args: &SynthArgs) -> CmdResult<()> {
    let file = match &args.config {
        Some(path) => ConfigFile::load(path).or_args()?,
        None => ConfigFile::default(),
    };
    let synth_config = config::resolve_synth(&file, args.seed).or_args()?;
    let corpus = synthgen::generate(&synth_config).or_args()?;
    std::fs::create_dir_all(&args.output)
        .with_context(|| format!("cannot create output directory {}", args.output.display()))
        .or_io()?;
    corpus.write_csvs(&args.output).or_io()?;
    synthgen::write_ground_truth(&args.output.join("ground_truth.json"), &synth_config)
        .or_io()?;
    println!(
        "synth: {} publications, {} authors, {} journals (seed {}) -> {}",
        corpus.publications().len(),
        corpus.author_count(),
        corpus.journals().len(),
        synth_config.seed,
        args.output.display()
    );
    Ok(())
}
