use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::corpus::{PredicationRecord, SentenceIndex};
use crate::grouping::{RelationGroup, RelationMap};

/// Per-year predication counts by relation group. Years without
/// predications are absent.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDistribution {
    pub years: BTreeMap<i32, BTreeMap<RelationGroup, u64>>,
}

impl RelationDistribution {
    pub fn year_total(&self, year: i32) -> u64 {
        self.years.get(&year).map_or(0, |g| g.values().sum())
    }

    pub fn count(&self, year: i32, group: RelationGroup) -> u64 {
        self.years.get(&year).and_then(|g| g.get(&group)).copied().unwrap_or(0)
    }

    /// Share of `group` among the year's predications; 0 for absent years.
    pub fn proportion(&self, year: i32, group: RelationGroup) -> f64 {
        match self.year_total(year) {
            0 => 0.0,
            total => self.count(year, group) as f64 / total as f64,
        }
    }
}

/// Predications are dated by their supporting sentence; predications whose
/// sentence is unknown are ignored.
pub fn relation_distribution<'a, I>(predications: I, sentences: &SentenceIndex, map: &RelationMap) -> RelationDistribution
where
    I: IntoIterator<Item = &'a PredicationRecord>,
{
    let mut dist = RelationDistribution::default();
    for p in predications {
        let Some(s) = sentences.get(p.sentence_id.as_str()) else { continue };
        *dist
            .years
            .entry(s.pub_year)
            .or_default()
            .entry(map.group(&p.predicate))
            .or_default() += 1;
    }
    dist
}
