//! Hedging and conflicting cue-word lexicons and sentence-level matching.

mod pattern;
mod tokenize;

use std::collections::HashSet;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

pub use pattern::{CueCategory, CuePattern};
pub use tokenize::tokenize;

use crate::corpus::{SentenceId, SentenceRecord};
use crate::error::Result;
use crate::tsv::{LoadReport, RowReader};

pub const LEXICON_COLUMNS: [&str; 3] = ["PATTERN", "CATEGORY", "REFERENCE_FREQUENCY"];

/// The shipped hedging/conflicting lexicon with reference corpus frequencies.
pub const DEFAULT_LEXICON_CSV: &str = include_str!("../../data/lexicon_table1.csv");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CueEntry {
    pub pattern: CuePattern,
    pub category: CueCategory,
    pub reference_frequency: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MatchedCue {
    pub pattern: String,
    pub category: CueCategory,
}

/// Cue patterns found in one sentence. Each pattern appears at most once, in
/// lexicon order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchResult {
    pub sentence_id: SentenceId,
    pub matched: Vec<MatchedCue>,
    pub has_hedging: bool,
    pub has_conflicting: bool,
}

impl MatchResult {
    pub fn new(sentence_id: SentenceId, matched: Vec<MatchedCue>) -> Self {
        let has = |c| matched.iter().any(|m| m.category == c);
        Self {
            has_hedging: has(CueCategory::Hedging),
            has_conflicting: has(CueCategory::Conflicting),
            sentence_id,
            matched,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.matched.is_empty()
    }

    pub fn has(&self, category: CueCategory) -> bool {
        match category {
            CueCategory::Hedging => self.has_hedging,
            CueCategory::Conflicting => self.has_conflicting,
        }
    }

    pub fn patterns(&self) -> impl Iterator<Item = &str> {
        self.matched.iter().map(|m| m.pattern.as_str())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Lexicon {
    entries: Vec<CueEntry>,
}

impl Lexicon {
    /// Builds a lexicon, keeping the first entry for any repeated pattern.
    pub fn new(entries: Vec<CueEntry>) -> Self {
        let mut seen = HashSet::new();
        let entries = entries
            .into_iter()
            .filter(|e| seen.insert(e.pattern.as_str().to_string()))
            .collect();
        Self { entries }
    }

    pub fn load(path: &Path) -> Result<(Self, LoadReport)> {
        let rows = RowReader::open(path, b',', &LEXICON_COLUMNS)?;
        Self::from_rows(rows)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<(Self, LoadReport)> {
        let rows = RowReader::new(reader, Path::new("<lexicon>"), b',', &LEXICON_COLUMNS)?;
        Self::from_rows(rows)
    }

    pub fn default_lexicon() -> Self {
        Self::from_reader(DEFAULT_LEXICON_CSV.as_bytes())
            .expect("shipped lexicon parses")
            .0
    }

    fn from_rows<R: Read>(rows: RowReader<R>) -> Result<(Self, LoadReport)> {
        let mut entries: Vec<CueEntry> = Vec::new();
        let mut report = LoadReport::default();
        for row in rows {
            let row = row?;
            report.rows += 1;
            if row.fields.len() != LEXICON_COLUMNS.len() {
                report.reject(row.line, format!("expected 3 columns, found {}", row.fields.len()));
                continue;
            }
            let pattern = match CuePattern::parse(row.get(0)) {
                Ok(p) => p,
                Err(e) => {
                    report.reject(row.line, e.to_string());
                    continue;
                }
            };
            let category = match row.get(1).parse::<CueCategory>() {
                Ok(c) => c,
                Err(e) => {
                    report.reject(row.line, e.to_string());
                    continue;
                }
            };
            let freq = row.get(2).trim().replace('_', "");
            let reference_frequency = if freq.is_empty() {
                None
            } else {
                match freq.parse::<u64>() {
                    Ok(f) => Some(f),
                    Err(_) => {
                        report.reject(row.line, format!("bad REFERENCE_FREQUENCY `{}`", row.get(2)));
                        continue;
                    }
                }
            };
            if entries.iter().any(|e| e.pattern == pattern) {
                report.reject(row.line, format!("duplicate pattern `{pattern}`"));
                continue;
            }
            entries.push(CueEntry {
                pattern,
                category,
                reference_frequency,
            });
            report.accepted += 1;
        }
        Ok((Self { entries }, report))
    }

    pub fn entries(&self) -> &[CueEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, pattern: &str) -> Option<&CueEntry> {
        self.entries.iter().find(|e| e.pattern.as_str() == pattern)
    }

    pub fn count(&self, category: CueCategory) -> usize {
        self.entries.iter().filter(|e| e.category == category).count()
    }

    pub fn match_tokens(&self, sentence_id: SentenceId, tokens: &[String]) -> MatchResult {
        let matched = self
            .entries
            .iter()
            .filter(|e| e.pattern.matches(tokens))
            .map(|e| MatchedCue {
                pattern: e.pattern.as_str().to_string(),
                category: e.category,
            })
            .collect();
        MatchResult::new(sentence_id, matched)
    }

    pub fn match_text(&self, sentence_id: SentenceId, text: &str) -> MatchResult {
        self.match_tokens(sentence_id, &tokenize(text))
    }
}

pub fn match_cues(sentence: &SentenceRecord, lexicon: &Lexicon) -> MatchResult {
    lexicon.match_text(sentence.sentence_id.clone(), &sentence.text)
}
