use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::corpus::{strip_negation, PredicationRecord, PredicationSet};
use crate::error::{Error, Result};
use crate::tsv::{LoadReport, RowReader};

pub const RELATION_COLUMNS: [&str; 2] = ["PREDICATE", "GROUP"];
pub const DEFAULT_RELATION_GROUPS: &str = include_str!("../../data/relation_groups.tsv");

/// Top-level branch of the relation hierarchy a predicate sits under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RelationGroup {
    Isa,
    AssociatedWith,
    PhysicallyRelatedTo,
    SpatiallyRelatedTo,
    TemporallyRelatedTo,
    FunctionallyRelatedTo,
    ConceptuallyRelatedTo,
    Others,
}

impl RelationGroup {
    pub const ALL: [RelationGroup; 8] = [
        RelationGroup::Isa,
        RelationGroup::AssociatedWith,
        RelationGroup::PhysicallyRelatedTo,
        RelationGroup::SpatiallyRelatedTo,
        RelationGroup::TemporallyRelatedTo,
        RelationGroup::FunctionallyRelatedTo,
        RelationGroup::ConceptuallyRelatedTo,
        RelationGroup::Others,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            RelationGroup::Isa => "isa",
            RelationGroup::AssociatedWith => "associated_with",
            RelationGroup::PhysicallyRelatedTo => "physically_related_to",
            RelationGroup::SpatiallyRelatedTo => "spatially_related_to",
            RelationGroup::TemporallyRelatedTo => "temporally_related_to",
            RelationGroup::FunctionallyRelatedTo => "functionally_related_to",
            RelationGroup::ConceptuallyRelatedTo => "conceptually_related_to",
            RelationGroup::Others => "others",
        }
    }
}

impl fmt::Display for RelationGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RelationGroup {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace([' ', '-'], "_");
        RelationGroup::ALL
            .into_iter()
            .find(|g| g.as_str() == norm)
            .ok_or_else(|| Error::Invalid(format!("unknown relation group `{s}`")))
    }
}

/// Predicate to relation-group lookup.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RelationMap {
    groups: HashMap<String, RelationGroup>,
}

impl RelationMap {
    pub fn load(path: &Path) -> Result<(Self, LoadReport)> {
        Self::from_rows(RowReader::open(path, b'\t', &RELATION_COLUMNS)?)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<(Self, LoadReport)> {
        Self::from_rows(RowReader::new(reader, Path::new("<relations>"), b'\t', &RELATION_COLUMNS)?)
    }

    pub fn default_map() -> Self {
        Self::from_reader(DEFAULT_RELATION_GROUPS.as_bytes())
            .expect("shipped relation map parses")
            .0
    }

    fn from_rows<R: Read>(rows: RowReader<R>) -> Result<(Self, LoadReport)> {
        let mut groups = HashMap::new();
        let mut report = LoadReport::default();
        for row in rows {
            let row = row?;
            report.rows += 1;
            if row.fields.len() != 2 {
                report.reject(row.line, "expected 2 columns");
                continue;
            }
            let predicate = strip_negation(row.get(0).trim()).to_ascii_uppercase();
            let group = match row.get(1).parse::<RelationGroup>() {
                Ok(g) => g,
                Err(e) => {
                    report.reject(row.line, e.to_string());
                    continue;
                }
            };
            if predicate.is_empty() || groups.contains_key(&predicate) {
                report.reject(row.line, format!("empty or duplicate predicate `{predicate}`"));
                continue;
            }
            groups.insert(predicate, group);
            report.accepted += 1;
        }
        Ok((Self { groups }, report))
    }

    /// `NEG_` is stripped before lookup; unmapped predicates fall into `others`.
    pub fn group(&self, predicate: &str) -> RelationGroup {
        let bare = strip_negation(predicate);
        self.groups
            .get(bare)
            .or_else(|| self.groups.get(&bare.to_ascii_uppercase()))
            .copied()
            .unwrap_or(RelationGroup::Others)
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

pub fn group_relation(predicate: &str, map: &RelationMap) -> RelationGroup {
    map.group(predicate)
}

/// Whether a predication belongs to the informative store: a functional
/// relation other than PROCESS_OF.
pub fn is_informative(predication: &PredicationRecord, map: &RelationMap) -> bool {
    map.group(&predication.predicate) == RelationGroup::FunctionallyRelatedTo
        && strip_negation(&predication.predicate) != "PROCESS_OF"
}

pub fn informative_filter<'a, I>(predications: I, map: &RelationMap) -> PredicationSet
where
    I: IntoIterator<Item = &'a PredicationRecord>,
{
    predications
        .into_iter()
        .filter(|p| is_informative(p, map))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn treats_is_functional() {
        assert_eq!(RelationMap::default_map().group("TREATS"), RelationGroup::FunctionallyRelatedTo);
    }

    #[test]
    fn negation_groups_with_positive_form() {
        let map = RelationMap::default_map();
        assert_eq!(map.group("NEG_PREDISPOSES"), map.group("PREDISPOSES"));
    }

    #[test]
    fn comparisons_and_unknowns_are_others() {
        let map = RelationMap::default_map();
        assert_eq!(map.group("HIGHER_THAN"), RelationGroup::Others);
        assert_eq!(map.group("CONVERTS_TO"), RelationGroup::Others);
        assert_eq!(map.group("FROBNICATES"), RelationGroup::Others);
    }

    #[test]
    fn every_group_is_represented() {
        let map = RelationMap::default_map();
        for g in RelationGroup::ALL {
            assert!(map.groups.values().any(|v| *v == g), "{g} has no predicate");
        }
    }

    #[test]
    fn group_names_parse() {
        assert_eq!("functionally related to".parse::<RelationGroup>().unwrap(), RelationGroup::FunctionallyRelatedTo);
        assert!("kinda_related".parse::<RelationGroup>().is_err());
    }
}
