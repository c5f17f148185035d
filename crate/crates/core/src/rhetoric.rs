//! Rhetorical role labeling of abstract sentences and the distribution of
//! cue-bearing sentences over those roles.
//!
//! A recognised structured-abstract header decides the label outright. Other
//! abstract sentences fall back to their relative position in the article's
//! abstract: the leading fraction is background, the trailing fraction is
//! conclusions, the rest stays unlabeled. Title sentences are unlabeled.
//! Per-sentence overrides win over everything.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::corpus::{ArticleId, Location, SentenceId, SentenceIndex, SentenceRecord};
use crate::error::{Error, Result};
use crate::lexicon::{CueCategory, MatchResult};
use crate::tsv::{LoadReport, RowReader};

pub const SYNONYM_COLUMNS: [&str; 2] = ["HEADER_TEXT", "LABEL"];
pub const OVERRIDE_COLUMNS: [&str; 2] = ["SENTENCE_ID", "LABEL"];
pub const DEFAULT_HEADER_SYNONYMS: &str = include_str!("../data/header_synonyms.tsv");

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SectionLabel {
    Background,
    Objectives,
    Methods,
    Results,
    Conclusions,
    Unlabeled,
}

impl SectionLabel {
    pub const ALL: [SectionLabel; 6] = [
        SectionLabel::Background,
        SectionLabel::Objectives,
        SectionLabel::Methods,
        SectionLabel::Results,
        SectionLabel::Conclusions,
        SectionLabel::Unlabeled,
    ];

    /// Labels shown in the four-role distribution figure.
    pub const FIGURE: [SectionLabel; 4] = [
        SectionLabel::Background,
        SectionLabel::Objectives,
        SectionLabel::Results,
        SectionLabel::Conclusions,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SectionLabel::Background => "background",
            SectionLabel::Objectives => "objectives",
            SectionLabel::Methods => "methods",
            SectionLabel::Results => "results",
            SectionLabel::Conclusions => "conclusions",
            SectionLabel::Unlabeled => "unlabeled",
        }
    }
}

impl fmt::Display for SectionLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SectionLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase();
        SectionLabel::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown section label `{s}`")))
    }
}

/// Uppercases and replaces punctuation with single spaces:
/// `"Aim of the study:"` becomes `"AIM OF THE STUDY"`.
pub fn normalize_header(header: &str) -> String {
    header
        .to_uppercase()
        .split(|c: char| !c.is_alphanumeric())
        .filter(|w| !w.is_empty())
        .collect::<Vec<_>>()
        .join(" ")
}

fn load_label_table<R: Read>(rows: RowReader<R>, normalize: fn(&str) -> String) -> Result<(HashMap<String, SectionLabel>, LoadReport)> {
    let mut map = HashMap::new();
    let mut report = LoadReport::default();
    for row in rows {
        let row = row?;
        report.rows += 1;
        if row.fields.len() != 2 {
            report.reject(row.line, "expected 2 columns");
            continue;
        }
        let key = normalize(row.get(0));
        let label = match row.get(1).parse::<SectionLabel>() {
            Ok(l) => l,
            Err(e) => {
                report.reject(row.line, e.to_string());
                continue;
            }
        };
        if key.is_empty() || map.contains_key(&key) {
            report.reject(row.line, format!("empty or duplicate key `{key}`"));
            continue;
        }
        map.insert(key, label);
        report.accepted += 1;
    }
    Ok((map, report))
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HeaderSynonyms(HashMap<String, SectionLabel>);

impl HeaderSynonyms {
    pub fn load(path: &Path) -> Result<(Self, LoadReport)> {
        let (map, report) = load_label_table(RowReader::open(path, b'\t', &SYNONYM_COLUMNS)?, normalize_header)?;
        Ok((Self(map), report))
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<(Self, LoadReport)> {
        let rows = RowReader::new(reader, Path::new("<synonyms>"), b'\t', &SYNONYM_COLUMNS)?;
        let (map, report) = load_label_table(rows, normalize_header)?;
        Ok((Self(map), report))
    }

    pub fn default_table() -> Self {
        Self::from_reader(DEFAULT_HEADER_SYNONYMS.as_bytes())
            .expect("shipped synonyms parse")
            .0
    }

    pub fn lookup(&self, header: &str) -> Option<SectionLabel> {
        self.0.get(&normalize_header(header)).copied()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Overrides(HashMap<String, SectionLabel>);

impl Overrides {
    pub fn load(path: &Path) -> Result<(Self, LoadReport)> {
        let rows = RowReader::open(path, b'\t', &OVERRIDE_COLUMNS)?;
        let (map, report) = load_label_table(rows, |s| s.trim().to_string())?;
        Ok((Self(map), report))
    }

    pub fn insert(&mut self, sentence_id: impl Into<String>, label: SectionLabel) {
        self.0.insert(sentence_id.into(), label);
    }

    pub fn get(&self, sentence_id: &str) -> Option<SectionLabel> {
        self.0.get(sentence_id).copied()
    }
}

/// Where a sentence sits among its article's abstract sentences (0-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AbstractPosition {
    pub index: usize,
    pub count: usize,
}

#[derive(Debug, Clone)]
pub struct SectionClassifier {
    pub synonyms: HeaderSynonyms,
    pub overrides: Overrides,
    pub background_fraction: f64,
    pub conclusion_fraction: f64,
}

impl Default for SectionClassifier {
    fn default() -> Self {
        Self {
            synonyms: HeaderSynonyms::default_table(),
            overrides: Overrides::default(),
            background_fraction: 0.2,
            conclusion_fraction: 0.2,
        }
    }
}

impl SectionClassifier {
    pub fn new(synonyms: HeaderSynonyms) -> Self {
        Self {
            synonyms,
            ..Self::default()
        }
    }

    pub fn classify(&self, sentence: &SentenceRecord, position: Option<AbstractPosition>) -> SectionLabel {
        if let Some(label) = self.overrides.get(sentence.sentence_id.as_str()) {
            return label;
        }
        if sentence.location == Location::Title {
            return SectionLabel::Unlabeled;
        }
        if let Some(label) = sentence.section_header.as_deref().and_then(|h| self.synonyms.lookup(h)) {
            return label;
        }
        match position {
            Some(pos) if pos.count > 0 => {
                let at = pos.index as f64;
                let n = pos.count as f64;
                if at < self.background_fraction * n {
                    SectionLabel::Background
                } else if at >= n - self.conclusion_fraction * n {
                    SectionLabel::Conclusions
                } else {
                    SectionLabel::Unlabeled
                }
            }
            _ => SectionLabel::Unlabeled,
        }
    }

    /// Labels every sentence; positions are taken from ingestion order within
    /// each article's abstract.
    pub fn classify_corpus(&self, sentences: &SentenceIndex) -> IndexMap<SentenceId, SectionLabel> {
        let mut per_article: HashMap<&ArticleId, usize> = HashMap::new();
        for s in sentences.iter().filter(|s| s.location == Location::Abstract) {
            *per_article.entry(&s.article_id).or_default() += 1;
        }
        let mut seen: HashMap<&ArticleId, usize> = HashMap::new();
        sentences
            .iter()
            .map(|s| {
                let position = (s.location == Location::Abstract).then(|| {
                    let index = seen.entry(&s.article_id).or_default();
                    let pos = AbstractPosition {
                        index: *index,
                        count: per_article[&s.article_id],
                    };
                    *index += 1;
                    pos
                });
                (s.sentence_id.clone(), self.classify(s, position))
            })
            .collect()
    }
}

/// Classifies one sentence in isolation: header lookup, else unlabeled.
pub fn classify_section(sentence: &SentenceRecord, classifier: &SectionClassifier) -> SectionLabel {
    classifier.classify(sentence, None)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellCounts {
    /// Sentences carrying at least one cue of the category.
    pub sentences: u64,
    /// Distinct cue patterns of the category summed over those sentences.
    pub cues: u64,
}

/// Label by category counts plus the number of sentences per label.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionDistribution {
    pub cells: BTreeMap<(SectionLabel, CueCategory), CellCounts>,
    pub label_totals: BTreeMap<SectionLabel, u64>,
}

impl SectionDistribution {
    pub fn cell(&self, label: SectionLabel, category: CueCategory) -> CellCounts {
        self.cells.get(&(label, category)).copied().unwrap_or_default()
    }

    pub fn label_total(&self, label: SectionLabel) -> u64 {
        self.label_totals.get(&label).copied().unwrap_or(0)
    }
}

pub fn section_cue_distribution(
    labels: &IndexMap<SentenceId, SectionLabel>,
    matches: &HashMap<SentenceId, MatchResult>,
) -> SectionDistribution {
    let mut dist = SectionDistribution::default();
    for label in SectionLabel::ALL {
        dist.label_totals.insert(label, 0);
        for category in CueCategory::ALL {
            dist.cells.insert((label, category), CellCounts::default());
        }
    }
    for (id, label) in labels {
        *dist.label_totals.entry(*label).or_default() += 1;
        let Some(m) = matches.get(id) else { continue };
        for category in CueCategory::ALL {
            let n = m.matched.iter().filter(|c| c.category == category).count() as u64;
            if n > 0 {
                let cell = dist.cells.entry((*label, category)).or_default();
                cell.sentences += 1;
                cell.cues += n;
            }
        }
    }
    dist
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lexicon::Lexicon;

    fn sentence(id: &str, article: &str, header: Option<&str>) -> SentenceRecord {
        SentenceRecord {
            sentence_id: SentenceId::new(id),
            article_id: ArticleId::new(article),
            pub_year: 2010,
            location: Location::Abstract,
            section_header: header.map(str::to_string),
            text: "x".into(),
        }
    }

    #[test]
    fn exact_and_synonym_headers() {
        let c = SectionClassifier::default();
        assert_eq!(c.classify(&sentence("1", "a", Some("CONCLUSIONS")), None), SectionLabel::Conclusions);
        assert_eq!(c.classify(&sentence("1", "a", Some("AIM OF THE STUDY")), None), SectionLabel::Objectives);
        assert_eq!(c.classify(&sentence("1", "a", Some("Aim of the study:")), None), SectionLabel::Objectives);
        assert_eq!(c.classify(&sentence("1", "a", Some("INTERPRETATION")), None), SectionLabel::Conclusions);
        assert_eq!(c.classify(&sentence("1", "a", Some("Introduction")), None), SectionLabel::Background);
        assert_eq!(c.classify(&sentence("1", "a", Some("FINDINGS")), None), SectionLabel::Results);
    }

    #[test]
    fn positional_fallback() {
        let c = SectionClassifier::default();
        let s = sentence("1", "a", None);
        let at = |index| c.classify(&s, Some(AbstractPosition { index, count: 10 }));
        assert_eq!(at(0), SectionLabel::Background);
        assert_eq!(at(1), SectionLabel::Background);
        assert_eq!(at(2), SectionLabel::Unlabeled);
        assert_eq!(at(7), SectionLabel::Unlabeled);
        assert_eq!(at(8), SectionLabel::Conclusions);
        assert_eq!(at(9), SectionLabel::Conclusions);
    }

    #[test]
    fn headers_dominate_position() {
        let c = SectionClassifier::default();
        let s = sentence("1", "a", Some("RESULTS"));
        assert_eq!(c.classify(&s, Some(AbstractPosition { index: 0, count: 10 })), SectionLabel::Results);
        // unrecognised headers fall back to position
        let s = sentence("1", "a", Some("WHAT IS NEW"));
        assert_eq!(c.classify(&s, Some(AbstractPosition { index: 9, count: 10 })), SectionLabel::Conclusions);
    }

    #[test]
    fn titles_are_unlabeled_and_overrides_win() {
        let mut c = SectionClassifier::default();
        let mut t = sentence("t", "a", Some("TITLE"));
        t.location = Location::Title;
        assert_eq!(c.classify(&t, None), SectionLabel::Unlabeled);
        c.overrides.insert("t", SectionLabel::Objectives);
        assert_eq!(c.classify(&t, None), SectionLabel::Objectives);
    }

    #[test]
    fn corpus_positions_are_per_article() {
        let idx: SentenceIndex = (0..10)
            .map(|i| sentence(&format!("a{i}"), "A", None))
            .chain((0..5).map(|i| sentence(&format!("b{i}"), "B", None)))
            .collect();
        let labels = SectionClassifier::default().classify_corpus(&idx);
        assert_eq!(labels["a0"], SectionLabel::Background);
        assert_eq!(labels["a5"], SectionLabel::Unlabeled);
        assert_eq!(labels["a9"], SectionLabel::Conclusions);
        assert_eq!(labels["b0"], SectionLabel::Background);
        assert_eq!(labels["b4"], SectionLabel::Conclusions);
    }

    #[test]
    fn distribution_counts_sentences() {
        let lex = Lexicon::default_lexicon();
        let mut labels = IndexMap::new();
        let mut matches = HashMap::new();
        for (id, text) in [("1", "It may possibly work."), ("2", "This is likely.")] {
            labels.insert(SentenceId::new(id), SectionLabel::Conclusions);
            matches.insert(SentenceId::new(id), lex.match_text(SentenceId::new(id), text));
        }
        let d = section_cue_distribution(&labels, &matches);
        let cell = d.cell(SectionLabel::Conclusions, CueCategory::Hedging);
        assert_eq!(cell.sentences, 2);
        assert_eq!(cell.cues, 3);
        assert_eq!(d.cell(SectionLabel::Conclusions, CueCategory::Conflicting).sentences, 0);
    }

    #[test]
    fn empty_corpus_gives_zero_table() {
        let d = section_cue_distribution(&IndexMap::new(), &HashMap::new());
        assert!(d.cells.values().all(|c| *c == CellCounts::default()));
        assert_eq!(d.cells.len(), 12);
    }
}
