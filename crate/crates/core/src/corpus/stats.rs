//! Per-year growth statistics: publications, predication instances and
//! first-occurrence ("novel") triples.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::ingest::SentenceIndex;
use super::model::{ArticleId, PredicationRecord, SentenceRecord, TripleKey};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct YearStats {
    pub publication_count: u64,
    pub total_triple_count: u64,
    pub novel_triple_count: u64,
    pub unique_triple_count_cumulative: u64,
}

/// Year-indexed statistics covering every year between the first and last
/// observed year, gaps included as zero rows.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    years: BTreeMap<i32, YearStats>,
}

impl CorpusStats {
    pub fn years(&self) -> impl Iterator<Item = (i32, &YearStats)> {
        self.years.iter().map(|(y, s)| (*y, s))
    }

    pub fn is_empty(&self) -> bool {
        self.years.is_empty()
    }

    pub fn first_year(&self) -> Option<i32> {
        self.years.keys().next().copied()
    }

    pub fn last_year(&self) -> Option<i32> {
        self.years.keys().next_back().copied()
    }

    /// Stats for any year; years without data report zero counts and the
    /// cumulative unique count reached so far.
    pub fn year(&self, year: i32) -> YearStats {
        if let Some(s) = self.years.get(&year) {
            return *s;
        }
        let carried = self
            .years
            .range(..year)
            .next_back()
            .map(|(_, s)| s.unique_triple_count_cumulative)
            .unwrap_or(0);
        YearStats {
            unique_triple_count_cumulative: carried,
            ..YearStats::default()
        }
    }

    pub fn total_novel(&self) -> u64 {
        self.years.values().map(|s| s.novel_triple_count).sum()
    }
}

/// Mergeable accumulator behind [`CorpusStats`].
///
/// Tallies over disjoint slices of a corpus merge exactly: article sets union,
/// instance counts add and first-occurrence years take the minimum.
#[derive(Debug, Clone, Default)]
pub struct StatsTally {
    articles: BTreeMap<i32, BTreeSet<ArticleId>>,
    totals: BTreeMap<i32, u64>,
    first_year: HashMap<TripleKey, i32>,
}

impl StatsTally {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_sentence(&mut self, sentence: &SentenceRecord) {
        self.articles
            .entry(sentence.pub_year)
            .or_default()
            .insert(sentence.article_id.clone());
    }

    pub fn add_predication(&mut self, predication: &PredicationRecord, year: i32) {
        *self.totals.entry(year).or_default() += 1;
        self.first_year
            .entry(predication.key())
            .and_modify(|y| *y = (*y).min(year))
            .or_insert(year);
    }

    pub fn merge(&mut self, other: StatsTally) {
        for (year, ids) in other.articles {
            self.articles.entry(year).or_default().extend(ids);
        }
        for (year, n) in other.totals {
            *self.totals.entry(year).or_default() += n;
        }
        for (key, year) in other.first_year {
            self.first_year
                .entry(key)
                .and_modify(|y| *y = (*y).min(year))
                .or_insert(year);
        }
    }

    pub fn finish(&self) -> CorpusStats {
        let mut novel: BTreeMap<i32, u64> = BTreeMap::new();
        for year in self.first_year.values() {
            *novel.entry(*year).or_default() += 1;
        }
        let bounds = self
            .articles
            .keys()
            .chain(self.totals.keys())
            .copied()
            .fold(None, |acc: Option<(i32, i32)>, y| match acc {
                None => Some((y, y)),
                Some((lo, hi)) => Some((lo.min(y), hi.max(y))),
            });
        let mut years = BTreeMap::new();
        if let Some((lo, hi)) = bounds {
            let mut cumulative = 0;
            for year in lo..=hi {
                let n = novel.get(&year).copied().unwrap_or(0);
                cumulative += n;
                years.insert(
                    year,
                    YearStats {
                        publication_count: self.articles.get(&year).map_or(0, |s| s.len() as u64),
                        total_triple_count: self.totals.get(&year).copied().unwrap_or(0),
                        novel_triple_count: n,
                        unique_triple_count_cumulative: cumulative,
                    },
                );
            }
        }
        CorpusStats { years }
    }
}

/// A triple is novel in the earliest publication year among its supporting
/// sentences. Predications whose sentence is missing from the index are
/// skipped with a warning.
pub fn compute_corpus_stats<'a, I>(predications: I, sentences: &SentenceIndex) -> CorpusStats
where
    I: IntoIterator<Item = &'a PredicationRecord>,
{
    let mut tally = StatsTally::new();
    for s in sentences.iter() {
        tally.add_sentence(s);
    }
    for p in predications {
        match sentences.get(p.sentence_id.as_str()) {
            Some(s) => tally.add_predication(p, s.pub_year),
            None => log::warn!("predication {} has no sentence; skipped", p.predication_id),
        }
    }
    tally.finish()
}
