mod config;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{Context, Result};
use clap::{Args, CommandFactory, Parser, Subcommand};

use knowmetric_core::acquisition::{fetch_articles, write_corpus, FetchConfig};
use knowmetric_core::corpus::{compute_corpus_stats, Store};
use knowmetric_core::grouping::{aggregate_type_pairs, informative_filter, triple_profiles, Granularity, SemTypeGroups};
use knowmetric_core::lexicon::Lexicon;
use knowmetric_core::metrics::{build_frequency_table_parallel, CategoryScope, LogBase};
use knowmetric_core::reports::{
    check_targets, match_all, read_targets, run_report, scored_in_scope, tables, verify_reports, FreqSource,
    builtin_targets, PipelineConfig, Resources, TargetFile,
};
use knowmetric_core::rhetoric::{section_cue_distribution, SectionLabel};

#[derive(Parser)]
#[command(name = "knowmetric", version, about = "Uncertainty metrics for SemMedDB-style triple corpora")]
struct Cli {
    /// `key = value` file supplying defaults for any subcommand option.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Download article records and write SENTENCES.tsv / ARTICLES.tsv.
    Fetch(FetchArgs),
    /// Load SENTENCES.tsv and PREDICATIONS.tsv into a store directory.
    Ingest(IngestArgs),
    /// Per-year publication, total, novel and cumulative unique triple counts.
    Stats(StatsArgs),
    /// Cue matches per sentence.
    Match(MatchArgs),
    /// Sentence frequency and IE weight per cue pattern.
    Freq(FreqArgs),
    /// IE and uncertainty rate per triple.
    Score(ScoreArgs),
    /// Rank semantic-type pairs from triple scores.
    Aggregate(AggregateArgs),
    /// Rhetorical section label per sentence.
    Sections(SectionsArgs),
    /// Write the full report bundle.
    Report(ReportArgs),
    /// Recompute sampled report cells from the store.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct FetchArgs {
    #[arg(long)]
    query: String,
    #[arg(long)]
    from: i32,
    #[arg(long)]
    to: i32,
    #[arg(long)]
    endpoint: String,
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    #[arg(long, default_value_t = 500)]
    page_size: u32,
    #[arg(long, default_value_t = 3)]
    max_in_flight: usize,
    /// Minimum delay between requests in milliseconds.
    #[arg(long, default_value_t = 350)]
    min_delay_ms: u64,
    #[arg(long, default_value_t = 3)]
    attempts: u32,
}

#[derive(Args)]
struct IngestArgs {
    #[arg(long)]
    sentences: PathBuf,
    #[arg(long)]
    predications: PathBuf,
    #[arg(long)]
    aliases: Option<PathBuf>,
    #[arg(long)]
    store: PathBuf,
}

#[derive(Args)]
struct StatsArgs {
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct MatchArgs {
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct FreqArgs {
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long, default_value = "10")]
    log_base: LogBase,
    /// Number of partitions counted in parallel and merged.
    #[arg(long, default_value_t = 8)]
    partitions: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ScoreArgs {
    #[arg(long)]
    store: PathBuf,
    /// Frequency table path, `builtin:table1` or `corpus`.
    #[arg(long, default_value = "builtin:table1")]
    freq: FreqSource,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long, default_value = "any")]
    category: CategoryScope,
    #[arg(long, default_value = "10")]
    log_base: LogBase,
    /// Score every predication rather than only informative relations.
    #[arg(long)]
    all_relations: bool,
    #[arg(long)]
    relation_groups: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct AggregateArgs {
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    scores: PathBuf,
    /// Recorded for the log only; the scores file already carries the scope.
    #[arg(long, default_value = "hedging")]
    category: CategoryScope,
    #[arg(long, default_value = "fine")]
    granularity: Granularity,
    #[arg(long)]
    semtype_groups: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    /// Keep triples without any uncertain supporting sentence.
    #[arg(long)]
    include_certain: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SectionsArgs {
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    synonyms: Option<PathBuf>,
    #[arg(long)]
    overrides: Option<PathBuf>,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long, default_value_t = 0.2)]
    background_fraction: f64,
    #[arg(long, default_value_t = 0.2)]
    conclusion_fraction: f64,
    /// Also write the label by category distribution as CSV.
    #[arg(long)]
    distribution: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    #[command(flatten)]
    pipeline: PipelineArgs,
}

#[derive(Args)]
struct PipelineArgs {
    /// Frequency table path, `builtin:table1` or `corpus`.
    #[arg(long, default_value = "builtin:table1")]
    freq: FreqSource,
    #[arg(long)]
    lexicon: Option<PathBuf>,
    #[arg(long, default_value = "10")]
    log_base: LogBase,
    #[arg(long, default_value = "fine")]
    granularity: Granularity,
    #[arg(long, default_value_t = 10)]
    top_k: usize,
    #[arg(long)]
    all_relations: bool,
    #[arg(long)]
    include_certain: bool,
    #[arg(long)]
    relation_groups: Option<PathBuf>,
    #[arg(long)]
    semtype_groups: Option<PathBuf>,
    #[arg(long)]
    synonyms: Option<PathBuf>,
    #[arg(long)]
    overrides: Option<PathBuf>,
    #[arg(long, default_value_t = 0.2)]
    background_fraction: f64,
    #[arg(long, default_value_t = 0.2)]
    conclusion_fraction: f64,
}

impl From<PipelineArgs> for PipelineConfig {
    fn from(a: PipelineArgs) -> Self {
        PipelineConfig {
            freq: a.freq,
            lexicon: a.lexicon,
            log_base: a.log_base,
            granularity: a.granularity,
            top_k: a.top_k,
            all_relations: a.all_relations,
            include_certain: a.include_certain,
            relation_groups: a.relation_groups,
            semtype_groups: a.semtype_groups,
            synonyms: a.synonyms,
            overrides: a.overrides,
            background_fraction: a.background_fraction,
            conclusion_fraction: a.conclusion_fraction,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    store: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cells sampled per report.
    #[arg(long, default_value_t = 3)]
    cells: usize,
    /// Also compare against a targets file; `builtin` selects the shipped one.
    #[arg(long)]
    targets: Option<String>,
}

fn open_store(dir: &Path) -> Result<Store> {
    Store::open(dir).with_context(|| format!("opening store {}", dir.display()))
}

fn write(path: &Path, body: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
}

fn load_lexicon(path: Option<&Path>) -> Result<Lexicon> {
    Ok(match path {
        Some(p) => Lexicon::load(p)?.0,
        None => Lexicon::default_lexicon(),
    })
}

fn run(cmd: Cmd) -> Result<ExitCode> {
    match cmd {
        Cmd::Fetch(a) => {
            let config = FetchConfig {
                page_size: a.page_size,
                max_in_flight: a.max_in_flight,
                min_delay: Duration::from_millis(a.min_delay_ms),
                max_attempts: a.attempts,
                ..FetchConfig::default()
            };
            let outcome = fetch_articles(&a.query, (a.from, a.to), &a.endpoint, &config)?;
            let sentences = write_corpus(&outcome.records, &a.out)?;
            println!(
                "fetched {} records ({} skipped, endpoint reported {}), wrote {} sentences",
                outcome.count(),
                outcome.skipped.len(),
                outcome.reported_count.map_or("no count".into(), |c| c.to_string()),
                sentences
            );
        }
        Cmd::Ingest(a) => {
            let store = Store::ingest(&a.sentences, &a.predications, a.aliases.as_deref(), &a.store)?;
            let (s, p) = (&store.summary.sentences, &store.summary.predications);
            println!(
                "sentences: {} accepted, {} rejected; predications: {} accepted, {} collapsed, {} rejected",
                s.accepted,
                s.rejected(),
                p.accepted,
                p.collapsed,
                p.rejected()
            );
        }
        Cmd::Stats(a) => {
            let store = open_store(&a.store)?;
            let stats = compute_corpus_stats(&store.predications, &store.sentences);
            write(&a.out, &tables::growth_csv(&stats))?;
            println!("{} years, {} unique triples", stats.years().count(), stats.total_novel());
        }
        Cmd::Match(a) => {
            let store = open_store(&a.store)?;
            let lexicon = load_lexicon(a.lexicon.as_deref())?;
            let matches = match_all(&store.sentences, &lexicon);
            write(&a.out, &tables::matches_tsv(&store.sentences, &matches))?;
            let hits = matches.values().filter(|m| !m.is_empty()).count();
            println!("{hits} of {} sentences carry a cue", store.sentences.len());
        }
        Cmd::Freq(a) => {
            let store = open_store(&a.store)?;
            let lexicon = load_lexicon(a.lexicon.as_deref())?;
            let texts: Vec<&str> = store.sentences.iter().map(|s| s.text.as_str()).collect();
            let table = build_frequency_table_parallel(&texts, &lexicon, a.partitions)?.with_base(a.log_base);
            table.write(&a.out)?;
            println!("{} patterns over {} sentences", table.len(), table.total());
        }
        Cmd::Score(a) => {
            let store = open_store(&a.store)?;
            let config = PipelineConfig {
                freq: a.freq,
                lexicon: a.lexicon,
                log_base: a.log_base,
                all_relations: a.all_relations,
                relation_groups: a.relation_groups,
                ..PipelineConfig::default()
            };
            let res = Resources::load(&config, &store.sentences)?;
            let matches = match_all(&store.sentences, &res.lexicon);
            let predications = if config.all_relations {
                store.predications.clone()
            } else {
                informative_filter(&store.predications, &res.relations)
            };
            let scored = scored_in_scope(&predications, &matches, &res.table, a.category, true)?;
            write(&a.out, &tables::triple_scores_tsv(&scored))?;
            let uncertain = scored.iter().filter(|t| t.score.uncertain_sentence_count > 0).count();
            println!("{} triples scored ({uncertain} with {} cues)", scored.len(), a.category);
        }
        Cmd::Aggregate(a) => {
            let store = open_store(&a.store)?;
            let (mut scored, report) = tables::read_triple_scores(&a.scores)?;
            if report.rejected() > 0 {
                log::warn!("{} malformed rows in {}", report.rejected(), a.scores.display());
            }
            if !a.include_certain {
                scored.retain(|t| t.score.uncertain_sentence_count > 0);
            }
            let groups = match &a.semtype_groups {
                Some(p) => SemTypeGroups::load(p)?.0,
                None => SemTypeGroups::builtin(a.granularity),
            };
            let profiles = triple_profiles(&store.predications);
            let pairs = aggregate_type_pairs(&scored, &profiles, &groups);
            write(&a.out, &tables::pairs_tsv(&pairs, a.top_k))?;
            println!(
                "{} {} triples in {} type pairs, top {} written",
                scored.len(),
                a.category,
                pairs.len(),
                a.top_k.min(pairs.len())
            );
        }
        Cmd::Sections(a) => {
            let store = open_store(&a.store)?;
            let config = PipelineConfig {
                lexicon: a.lexicon,
                synonyms: a.synonyms,
                overrides: a.overrides,
                background_fraction: a.background_fraction,
                conclusion_fraction: a.conclusion_fraction,
                ..PipelineConfig::default()
            };
            let res = Resources::load(&config, &store.sentences)?;
            let labels = res.classifier.classify_corpus(&store.sentences);
            write(&a.out, &tables::labels_tsv(&labels))?;
            if let Some(path) = &a.distribution {
                let matches = match_all(&store.sentences, &res.lexicon);
                let dist = section_cue_distribution(&labels, &matches);
                write(path, &tables::sections_csv(&dist, &SectionLabel::ALL))?;
            }
            let labelled = labels.values().filter(|l| **l != SectionLabel::Unlabeled).count();
            println!("{labelled} of {} sentences labelled", labels.len());
        }
        Cmd::Report(a) => {
            let store = open_store(&a.store)?;
            let config: PipelineConfig = a.pipeline.into();
            let bundle = run_report(&store, &config, &a.out_dir)?;
            println!("wrote {} files to {}", bundle.files.len() + 1, a.out_dir.display());
        }
        Cmd::Verify(a) => {
            let store = open_store(&a.store)?;
            let mut checks = verify_reports(&store, &a.out_dir, a.seed, a.cells)?;
            if let Some(t) = &a.targets {
                let targets: TargetFile = if t == "builtin" {
                    builtin_targets()
                } else {
                    read_targets(Path::new(t))?
                };
                checks.extend(check_targets(&a.out_dir, &targets)?);
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            for c in &checks {
                let status = if c.passed() { "ok" } else { "MISMATCH" };
                println!("{status}\t{}\t{}\texpected {}\tfound {}", c.report, c.cell, c.expected, c.found);
            }
            println!("{} checks, {failed} mismatched", checks.len());
            if failed > 0 {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let mut args: Vec<OsString> = std::env::args_os().collect();
    if let Some(path) = config::find_config(&args) {
        match config::load(Path::new(&path)) {
            Ok(entries) => {
                for key in config::inject(&Cli::command(), &mut args, &entries) {
                    log::warn!("config key `{key}` does not apply to this subcommand");
                }
            }
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse_from(args);
    if let Some(path) = &cli.config {
        log::debug!("defaults read from {}", path.display());
    }
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
