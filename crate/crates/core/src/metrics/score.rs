use std::borrow::Cow;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::frequency::FrequencyTable;
use crate::corpus::{SentenceId, TripleKey};
use crate::error::{Error, Result};
use crate::lexicon::{CueCategory, MatchResult};

/// Which cue categories contribute to a score.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CategoryScope {
    Hedging,
    Conflicting,
    #[default]
    Any,
}

impl CategoryScope {
    pub fn includes(self, category: CueCategory) -> bool {
        match self {
            CategoryScope::Any => true,
            CategoryScope::Hedging => category == CueCategory::Hedging,
            CategoryScope::Conflicting => category == CueCategory::Conflicting,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CategoryScope::Hedging => "hedging",
            CategoryScope::Conflicting => "conflicting",
            CategoryScope::Any => "any",
        }
    }
}

impl From<CueCategory> for CategoryScope {
    fn from(c: CueCategory) -> Self {
        match c {
            CueCategory::Hedging => CategoryScope::Hedging,
            CueCategory::Conflicting => CategoryScope::Conflicting,
        }
    }
}

impl fmt::Display for CategoryScope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CategoryScope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hedging" => Ok(CategoryScope::Hedging),
            "conflicting" => Ok(CategoryScope::Conflicting),
            "any" => Ok(CategoryScope::Any),
            other => Err(Error::Invalid(format!(
                "category must be hedging, conflicting or any, found `{other}`"
            ))),
        }
    }
}

/// Entropy sum plus uncertain/total sentence counts for a triple or pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyScore {
    pub ie: f64,
    pub rate: f64,
    pub uncertain_sentence_count: u64,
    pub total_sentence_count: u64,
}

impl UncertaintyScore {
    pub fn new(ie: f64, uncertain: u64, total: u64) -> Self {
        Self {
            ie,
            rate: if total == 0 { 0.0 } else { uncertain as f64 / total as f64 },
            uncertain_sentence_count: uncertain,
            total_sentence_count: total,
        }
    }

    /// Pools two scores: IE adds, the rate is recomputed from pooled counts.
    pub fn pooled(&self, other: &UncertaintyScore) -> UncertaintyScore {
        UncertaintyScore::new(
            self.ie + other.ie,
            self.uncertain_sentence_count + other.uncertain_sentence_count,
            self.total_sentence_count + other.total_sentence_count,
        )
    }
}

/// U(s): sum of entropy weights over the distinct cues matched in a sentence,
/// restricted to `scope`.
pub fn sentence_uncertainty(m: &MatchResult, table: &FrequencyTable, scope: CategoryScope) -> Result<f64> {
    let mut total = 0.0;
    for cue in m.matched.iter().filter(|c| scope.includes(c.category)) {
        total += table
            .ie(&cue.pattern)
            .ok_or_else(|| Error::UnknownPattern(cue.pattern.clone()))?;
    }
    Ok(total)
}

fn is_uncertain(m: &MatchResult, scope: CategoryScope) -> bool {
    m.matched.iter().any(|c| scope.includes(c.category))
}

/// U(t) over all supporting sentences and the share of them carrying a cue
/// in `scope`.
pub fn triple_uncertainty<'a, I>(
    key: &TripleKey,
    support: I,
    table: &FrequencyTable,
    scope: CategoryScope,
) -> Result<UncertaintyScore>
where
    I: IntoIterator<Item = &'a MatchResult>,
{
    let mut ie = 0.0;
    let (mut uncertain, mut total) = (0u64, 0u64);
    for m in support {
        total += 1;
        ie += sentence_uncertainty(m, table, scope)?;
        if is_uncertain(m, scope) {
            uncertain += 1;
        }
    }
    if total == 0 {
        return Err(Error::EmptySupport(key.to_string()));
    }
    Ok(UncertaintyScore::new(ie, uncertain, total))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredTriple {
    pub key: TripleKey,
    pub score: UncertaintyScore,
}

/// Scores every triple in `support` (distinct sentences per triple).
/// Sentences without a match result count as cue-free.
pub fn score_triples(
    support: &BTreeMap<TripleKey, Vec<SentenceId>>,
    matches: &HashMap<SentenceId, MatchResult>,
    table: &FrequencyTable,
    scope: CategoryScope,
) -> Result<Vec<ScoredTriple>> {
    let mut out = Vec::with_capacity(support.len());
    for (key, sentences) in support {
        let resolved: Vec<Cow<'_, MatchResult>> = sentences
            .iter()
            .map(|s| match matches.get(s) {
                Some(m) => Cow::Borrowed(m),
                None => Cow::Owned(MatchResult::new(s.clone(), Vec::new())),
            })
            .collect();
        let support = resolved.iter().map(|m| m.as_ref());
        let score = triple_uncertainty(key, support, table, scope)?;
        out.push(ScoredTriple {
            key: key.clone(),
            score,
        });
    }
    Ok(out)
}
