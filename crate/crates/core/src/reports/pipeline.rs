//! End-to-end analysis of a store and emission of the report bundle.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::relations::{relation_distribution, RelationDistribution};
use super::svg::{grouped_bars, line_chart, stacked_bars, Series};
use super::tables;
use crate::corpus::{
    bytes_digest, compute_corpus_stats, file_digest, triple_support, CorpusStats, PredicationSet,
    SentenceId, SentenceIndex, Store, TripleKey,
};
use crate::error::{Error, Result};
use crate::grouping::{
    aggregate_type_pairs, informative_filter, triple_profiles, Granularity, RelationGroup, RelationMap,
    SemTypeGroups, TripleProfile, TypePairScore,
};
use crate::lexicon::{match_cues, CueCategory, Lexicon, MatchResult};
use crate::metrics::{
    build_frequency_table, builtin_table1, score_triples, CategoryScope, FrequencyTable, LogBase, ScoredTriple,
};
use crate::rhetoric::{
    section_cue_distribution, HeaderSynonyms, Overrides, SectionClassifier, SectionDistribution, SectionLabel,
};

pub const BUILTIN_TABLE1: &str = "builtin:table1";
pub const CORPUS_FREQ: &str = "corpus";

pub const GROWTH_CSV: &str = "growth.csv";
pub const GROWTH_SVG: &str = "growth.svg";
pub const RELATIONS_CSV: &str = "relations.csv";
pub const RELATIONS_SVG: &str = "relations.svg";
pub const SECTIONS_CSV: &str = "sections.csv";
pub const SECTIONS_ALL_CSV: &str = "sections_all.csv";
pub const SECTIONS_SVG: &str = "sections.svg";
pub const PAIRS_HEDGING_TSV: &str = "pairs_hedging.tsv";
pub const PAIRS_CONFLICTING_TSV: &str = "pairs_conflicting.tsv";
pub const MANIFEST_JSON: &str = "manifest.json";

/// Where IE weights come from.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum FreqSource {
    /// Reference frequencies shipped with the default lexicon.
    #[default]
    Builtin,
    /// Counted over the store's own sentences.
    Corpus,
    File(PathBuf),
}

impl FromStr for FreqSource {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.trim() {
            BUILTIN_TABLE1 => FreqSource::Builtin,
            CORPUS_FREQ => FreqSource::Corpus,
            "" => return Err(Error::Invalid("empty frequency source".into())),
            path => FreqSource::File(PathBuf::from(path)),
        })
    }
}

impl fmt::Display for FreqSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreqSource::Builtin => f.write_str(BUILTIN_TABLE1),
            FreqSource::Corpus => f.write_str(CORPUS_FREQ),
            FreqSource::File(p) => write!(f, "{}", p.display()),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub freq: FreqSource,
    pub lexicon: Option<PathBuf>,
    pub log_base: LogBase,
    pub granularity: Granularity,
    pub top_k: usize,
    /// Score every predication instead of only the informative ones.
    pub all_relations: bool,
    /// Keep triples without any cue of the category in the pair rankings.
    pub include_certain: bool,
    pub relation_groups: Option<PathBuf>,
    pub semtype_groups: Option<PathBuf>,
    pub synonyms: Option<PathBuf>,
    pub overrides: Option<PathBuf>,
    pub background_fraction: f64,
    pub conclusion_fraction: f64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            freq: FreqSource::Builtin,
            lexicon: None,
            log_base: LogBase::Ten,
            granularity: Granularity::Fine,
            top_k: 10,
            all_relations: false,
            include_certain: false,
            relation_groups: None,
            semtype_groups: None,
            synonyms: None,
            overrides: None,
            background_fraction: 0.2,
            conclusion_fraction: 0.2,
        }
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v.trim().to_ascii_lowercase().as_str() {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::Invalid(format!("{key}: expected true or false, found `{other}`"))),
    }
}

fn parse_num<T: FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .parse()
        .map_err(|_| Error::Invalid(format!("{key}: cannot parse `{v}`")))
}

impl PipelineConfig {
    /// Flat `key = value` view, using the same keys as the config file.
    pub fn to_pairs(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: &str, v: String| {
            m.insert(k.to_string(), v);
        };
        put("freq", self.freq.to_string());
        put("log-base", self.log_base.to_string());
        put("granularity", self.granularity.to_string());
        put("top-k", self.top_k.to_string());
        put("all-relations", self.all_relations.to_string());
        put("include-certain", self.include_certain.to_string());
        put("background-fraction", self.background_fraction.to_string());
        put("conclusion-fraction", self.conclusion_fraction.to_string());
        for (k, v) in [
            ("lexicon", &self.lexicon),
            ("relation-groups", &self.relation_groups),
            ("semtype-groups", &self.semtype_groups),
            ("synonyms", &self.synonyms),
            ("overrides", &self.overrides),
        ] {
            if let Some(p) = v {
                put(k, p.display().to_string());
            }
        }
        m
    }

    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        let mut c = PipelineConfig::default();
        for (k, v) in pairs {
            match k.as_str() {
                "freq" => c.freq = v.parse()?,
                "log-base" => c.log_base = v.parse()?,
                "granularity" => c.granularity = v.parse()?,
                "top-k" => c.top_k = parse_num(k, v)?,
                "all-relations" => c.all_relations = parse_bool(k, v)?,
                "include-certain" => c.include_certain = parse_bool(k, v)?,
                "background-fraction" => c.background_fraction = parse_num(k, v)?,
                "conclusion-fraction" => c.conclusion_fraction = parse_num(k, v)?,
                "lexicon" => c.lexicon = Some(v.into()),
                "relation-groups" => c.relation_groups = Some(v.into()),
                "semtype-groups" => c.semtype_groups = Some(v.into()),
                "synonyms" => c.synonyms = Some(v.into()),
                "overrides" => c.overrides = Some(v.into()),
                other => return Err(Error::Invalid(format!("unknown configuration key `{other}`"))),
            }
        }
        Ok(c)
    }
}

/// Lexicon, weights and mappings resolved from a configuration.
#[derive(Debug, Clone)]
pub struct Resources {
    pub lexicon: Lexicon,
    pub table: FrequencyTable,
    pub relations: RelationMap,
    pub semtypes: SemTypeGroups,
    pub classifier: SectionClassifier,
    /// Digest of every configured input file, keyed by configuration key.
    pub digests: BTreeMap<String, String>,
}

impl Resources {
    pub fn load(config: &PipelineConfig, sentences: &SentenceIndex) -> Result<Self> {
        let mut digests = BTreeMap::new();
        let mut note = |key: &str, path: &Path| -> Result<()> {
            digests.insert(key.to_string(), file_digest(path)?);
            Ok(())
        };
        let lexicon = match &config.lexicon {
            Some(p) => {
                note("lexicon", p)?;
                Lexicon::load(p)?.0
            }
            None => Lexicon::default_lexicon(),
        };
        let table = match &config.freq {
            FreqSource::Builtin => builtin_table1().with_base(config.log_base),
            FreqSource::Corpus => {
                build_frequency_table(sentences.iter().map(|s| s.text.as_str()), &lexicon)?.with_base(config.log_base)
            }
            FreqSource::File(p) => {
                note("freq", p)?;
                FrequencyTable::read(p, config.log_base)?
            }
        };
        let relations = match &config.relation_groups {
            Some(p) => {
                note("relation-groups", p)?;
                RelationMap::load(p)?.0
            }
            None => RelationMap::default_map(),
        };
        let semtypes = match &config.semtype_groups {
            Some(p) => {
                note("semtype-groups", p)?;
                SemTypeGroups::load(p)?.0
            }
            None => SemTypeGroups::builtin(config.granularity),
        };
        let mut classifier = SectionClassifier::default();
        if let Some(p) = &config.synonyms {
            note("synonyms", p)?;
            classifier.synonyms = HeaderSynonyms::load(p)?.0;
        }
        if let Some(p) = &config.overrides {
            note("overrides", p)?;
            classifier.overrides = Overrides::load(p)?.0;
        }
        classifier.background_fraction = config.background_fraction;
        classifier.conclusion_fraction = config.conclusion_fraction;
        Ok(Self {
            lexicon,
            table,
            relations,
            semtypes,
            classifier,
            digests,
        })
    }
}

/// Cue matches for every sentence, computed in parallel.
pub fn match_all(sentences: &SentenceIndex, lexicon: &Lexicon) -> HashMap<SentenceId, MatchResult> {
    let all: Vec<_> = sentences.iter().collect();
    all.par_iter().map(|s| (s.sentence_id.clone(), match_cues(s, lexicon))).collect()
}

/// Scores triples in `scope`; unless `include_certain`, drops triples
/// without any uncertain supporting sentence.
pub fn scored_in_scope(
    predications: &PredicationSet,
    matches: &HashMap<SentenceId, MatchResult>,
    table: &FrequencyTable,
    scope: CategoryScope,
    include_certain: bool,
) -> Result<Vec<ScoredTriple>> {
    let support = triple_support(predications);
    let mut scored = score_triples(&support, matches, table, scope)?;
    if !include_certain {
        scored.retain(|t| t.score.uncertain_sentence_count > 0);
    }
    Ok(scored)
}

/// Everything the report bundle is rendered from.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub matches: HashMap<SentenceId, MatchResult>,
    pub stats: CorpusStats,
    pub relations: RelationDistribution,
    pub labels: IndexMap<SentenceId, SectionLabel>,
    pub sections: SectionDistribution,
    pub scored_predications: PredicationSet,
    pub profiles: BTreeMap<TripleKey, TripleProfile>,
    pub scored_hedging: Vec<ScoredTriple>,
    pub scored_conflicting: Vec<ScoredTriple>,
    /// Full rankings; the tables keep the top `k`.
    pub pairs_hedging: Vec<TypePairScore>,
    pub pairs_conflicting: Vec<TypePairScore>,
}

impl Analysis {
    pub fn run(store: &Store, config: &PipelineConfig, res: &Resources) -> Result<Self> {
        let matches = match_all(&store.sentences, &res.lexicon);
        let stats = compute_corpus_stats(&store.predications, &store.sentences);
        let relations = relation_distribution(&store.predications, &store.sentences, &res.relations);
        let labels = res.classifier.classify_corpus(&store.sentences);
        let sections = section_cue_distribution(&labels, &matches);

        let scored_predications = if config.all_relations {
            store.predications.clone()
        } else {
            informative_filter(&store.predications, &res.relations)
        };
        let profiles = triple_profiles(&scored_predications);
        let score = |scope| scored_in_scope(&scored_predications, &matches, &res.table, scope, config.include_certain);
        let scored_hedging = score(CategoryScope::Hedging)?;
        let scored_conflicting = score(CategoryScope::Conflicting)?;
        let pairs_hedging = aggregate_type_pairs(&scored_hedging, &profiles, &res.semtypes);
        let pairs_conflicting = aggregate_type_pairs(&scored_conflicting, &profiles, &res.semtypes);
        Ok(Self {
            matches,
            stats,
            relations,
            labels,
            sections,
            scored_predications,
            profiles,
            scored_hedging,
            scored_conflicting,
            pairs_hedging,
            pairs_conflicting,
        })
    }

    pub fn summary(&self, store: &Store) -> BTreeMap<String, u64> {
        let articles: HashSet<_> = store.sentences.iter().map(|s| &s.article_id).collect();
        let unique: HashSet<_> = store.predications.iter().map(|p| p.key()).collect();
        let mut m = BTreeMap::new();
        for (k, v) in [
            ("articles", articles.len()),
            ("sentences", store.sentences.len()),
            ("predications", store.predications.len()),
            ("unique_triples", unique.len()),
            ("scored_triples", self.profiles.len()),
            ("hedging_triples", self.scored_hedging.len()),
            ("hedging_pairs", self.pairs_hedging.len()),
            ("conflicting_triples", self.scored_conflicting.len()),
            ("conflicting_pairs", self.pairs_conflicting.len()),
        ] {
            m.insert(k.to_string(), v as u64);
        }
        m
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub config: BTreeMap<String, String>,
    /// Store files and configured resource files with their SHA-256.
    pub inputs: BTreeMap<String, String>,
    pub summary: BTreeMap<String, u64>,
    /// SHA-256 of every emitted file other than the manifest.
    pub outputs: BTreeMap<String, String>,
}

impl Manifest {
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join(MANIFEST_JSON);
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        Ok(serde_json::from_str(&text)?)
    }
}

/// Rendered report files plus the manifest describing them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReportBundle {
    /// File name to contents, in emission order.
    pub files: IndexMap<&'static str, String>,
    pub manifest: Manifest,
}

fn growth_svg(stats: &CorpusStats) -> String {
    let years: Vec<String> = stats.years().map(|(y, _)| y.to_string()).collect();
    let col = |f: fn(&crate::corpus::YearStats) -> u64| stats.years().map(|(_, y)| f(y) as f64).collect();
    line_chart(
        "Publications, total triples and novel triples per year",
        &years,
        &[
            Series { name: "publications", values: col(|y| y.publication_count) },
            Series { name: "total triples", values: col(|y| y.total_triple_count) },
            Series { name: "novel triples", values: col(|y| y.novel_triple_count) },
        ],
    )
}

fn relations_svg(dist: &RelationDistribution) -> String {
    let years: Vec<String> = dist.years.keys().map(i32::to_string).collect();
    let series: Vec<Series> = RelationGroup::ALL
        .iter()
        .map(|g| Series {
            name: g.as_str(),
            values: dist.years.keys().map(|y| dist.proportion(*y, *g)).collect(),
        })
        .collect();
    stacked_bars("Relation groups per year", &years, &series)
}

fn sections_svg(dist: &SectionDistribution) -> String {
    let labels: Vec<String> = SectionLabel::FIGURE.iter().map(|l| l.to_string()).collect();
    let series: Vec<Series> = CueCategory::ALL
        .iter()
        .map(|c| Series {
            name: c.as_str(),
            values: SectionLabel::FIGURE
                .iter()
                .map(|l| dist.cell(*l, *c).sentences as f64)
                .collect(),
        })
        .collect();
    grouped_bars("Cue-bearing sentences by abstract section", &labels, &series)
}

impl ReportBundle {
    pub fn build(store: &Store, config: &PipelineConfig, res: &Resources, analysis: &Analysis) -> Result<Self> {
        let mut files = IndexMap::new();
        files.insert(GROWTH_CSV, tables::growth_csv(&analysis.stats));
        files.insert(GROWTH_SVG, growth_svg(&analysis.stats));
        files.insert(RELATIONS_CSV, tables::relations_csv(&analysis.relations));
        files.insert(RELATIONS_SVG, relations_svg(&analysis.relations));
        files.insert(SECTIONS_CSV, tables::sections_csv(&analysis.sections, &SectionLabel::FIGURE));
        files.insert(SECTIONS_ALL_CSV, tables::sections_csv(&analysis.sections, &SectionLabel::ALL));
        files.insert(SECTIONS_SVG, sections_svg(&analysis.sections));
        files.insert(PAIRS_HEDGING_TSV, tables::pair_table_tsv(&analysis.pairs_hedging, config.top_k));
        files.insert(
            PAIRS_CONFLICTING_TSV,
            tables::pair_table_tsv(&analysis.pairs_conflicting, config.top_k),
        );

        let mut inputs: BTreeMap<String, String> = store
            .digests()?
            .into_iter()
            .map(|(k, v)| (format!("store/{k}"), v))
            .collect();
        inputs.extend(res.digests.iter().map(|(k, v)| (k.clone(), v.clone())));
        let manifest = Manifest {
            tool: "knowmetric".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            config: config.to_pairs(),
            inputs,
            summary: analysis.summary(store),
            outputs: files.iter().map(|(k, v)| (k.to_string(), bytes_digest(v.as_bytes()))).collect(),
        };
        Ok(Self { files, manifest })
    }

    pub fn write(&self, out_dir: &Path) -> Result<()> {
        std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
        for (name, body) in &self.files {
            let path = out_dir.join(name);
            std::fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        let path = out_dir.join(MANIFEST_JSON);
        let json = serde_json::to_string_pretty(&self.manifest)? + "\n";
        std::fs::write(&path, json).map_err(|e| Error::io(&path, e))
    }
}

/// Loads resources, runs the analysis and writes the bundle to `out_dir`.
pub fn run_report(store: &Store, config: &PipelineConfig, out_dir: &Path) -> Result<ReportBundle> {
    let res = Resources::load(config, &store.sentences)?;
    let analysis = Analysis::run(store, config, &res)?;
    let bundle = ReportBundle::build(store, config, &res, &analysis)?;
    bundle.write(out_dir)?;
    Ok(bundle)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_pairs_round_trip() {
        let config = PipelineConfig {
            freq: FreqSource::File("f.csv".into()),
            log_base: LogBase::E,
            granularity: Granularity::Coarse,
            top_k: 3,
            include_certain: true,
            synonyms: Some("syn.tsv".into()),
            ..PipelineConfig::default()
        };
        assert_eq!(PipelineConfig::from_pairs(&config.to_pairs()).unwrap(), config);
    }

    #[test]
    fn unknown_key_is_rejected() {
        let mut m = BTreeMap::new();
        m.insert("colour".to_string(), "red".to_string());
        assert!(PipelineConfig::from_pairs(&m).is_err());
    }

    #[test]
    fn freq_source_parses() {
        assert_eq!("builtin:table1".parse::<FreqSource>().unwrap(), FreqSource::Builtin);
        assert_eq!("corpus".parse::<FreqSource>().unwrap(), FreqSource::Corpus);
        assert_eq!("x/freq.csv".parse::<FreqSource>().unwrap(), FreqSource::File("x/freq.csv".into()));
    }
}
