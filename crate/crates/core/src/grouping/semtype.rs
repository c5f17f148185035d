use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;
use std::sync::Mutex;

use crate::error::{Error, Result};
use crate::tsv::{LoadReport, RowReader};

pub const SEMTYPE_COLUMNS: [&str; 2] = ["SEMTYPE_CODE", "GROUP_NAME"];
pub const UNGROUPED: &str = "ungrouped";

pub const FINE_SEMTYPE_GROUPS: &str = include_str!("../../data/semtype_groups_fine.tsv");
pub const COARSE_SEMTYPE_GROUPS: &str = include_str!("../../data/semtype_groups_coarse.tsv");

/// Fine labels are the semantic type names themselves ("Disease or
/// Syndrome"); coarse labels are the broad semantic groups ("Disorders").
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Granularity {
    #[default]
    Fine,
    Coarse,
}

impl fmt::Display for Granularity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Granularity::Fine => "fine",
            Granularity::Coarse => "coarse",
        })
    }
}

impl FromStr for Granularity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "fine" => Ok(Granularity::Fine),
            "coarse" => Ok(Granularity::Coarse),
            other => Err(Error::Invalid(format!("granularity must be fine or coarse, found `{other}`"))),
        }
    }
}

#[derive(Debug, Default)]
pub struct SemTypeGroups {
    groups: HashMap<String, String>,
    reported: Mutex<HashSet<String>>,
}

impl PartialEq for SemTypeGroups {
    fn eq(&self, other: &Self) -> bool {
        self.groups == other.groups
    }
}

impl Clone for SemTypeGroups {
    fn clone(&self) -> Self {
        Self {
            groups: self.groups.clone(),
            reported: Mutex::default(),
        }
    }
}

impl SemTypeGroups {
    pub fn load(path: &Path) -> Result<(Self, LoadReport)> {
        Self::from_rows(RowReader::open(path, b'\t', &SEMTYPE_COLUMNS)?)
    }

    pub fn from_reader<R: Read>(reader: R) -> Result<(Self, LoadReport)> {
        Self::from_rows(RowReader::new(reader, Path::new("<semtypes>"), b'\t', &SEMTYPE_COLUMNS)?)
    }

    pub fn builtin(granularity: Granularity) -> Self {
        let src = match granularity {
            Granularity::Fine => FINE_SEMTYPE_GROUPS,
            Granularity::Coarse => COARSE_SEMTYPE_GROUPS,
        };
        Self::from_reader(src.as_bytes()).expect("shipped semtype map parses").0
    }

    fn from_rows<R: Read>(rows: RowReader<R>) -> Result<(Self, LoadReport)> {
        let mut groups = HashMap::new();
        let mut report = LoadReport::default();
        for row in rows {
            let row = row?;
            report.rows += 1;
            let (code, name) = (row.get(0).trim().to_ascii_lowercase(), row.get(1).trim());
            if row.fields.len() != 2 || code.is_empty() || name.is_empty() {
                report.reject(row.line, "expected SEMTYPE_CODE and GROUP_NAME");
                continue;
            }
            // one group per code keeps the member sets disjoint
            if groups.contains_key(&code) {
                report.reject(row.line, format!("semantic type `{code}` already grouped"));
                continue;
            }
            groups.insert(code, name.to_string());
            report.accepted += 1;
        }
        Ok((
            Self {
                groups,
                reported: Mutex::default(),
            },
            report,
        ))
    }

    /// Group label for a semantic-type code, or [`UNGROUPED`].
    pub fn group<'a>(&'a self, code: &str) -> &'a str {
        let code = code.trim().to_ascii_lowercase();
        match self.groups.get(&code) {
            Some(name) => name,
            None => {
                let mut reported = self.reported.lock().unwrap_or_else(|e| e.into_inner());
                if reported.insert(code.clone()) {
                    log::warn!("semantic type `{code}` has no group; using `{UNGROUPED}`");
                }
                UNGROUPED
            }
        }
    }

    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn group_names(&self) -> HashSet<&str> {
        self.groups.values().map(String::as_str).collect()
    }
}

pub fn group_semtype<'a>(code: &str, groups: &'a SemTypeGroups) -> &'a str {
    groups.group(code)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fine_labels() {
        let g = SemTypeGroups::builtin(Granularity::Fine);
        assert_eq!(g.group("dsyn"), "Disease or Syndrome");
        assert_eq!(g.group("aapp"), "Amino Acid, Peptide, or Protein");
        assert_eq!(g.group("topp"), "Therapeutic or Preventive Procedure");
        assert_eq!(g.group("zzzz"), UNGROUPED);
    }

    #[test]
    fn coarse_labels() {
        let g = SemTypeGroups::builtin(Granularity::Coarse);
        assert_eq!(g.group("dsyn"), "Disorders");
        assert_eq!(g.group("aapp"), "Chemicals & Drugs");
        assert_eq!(g.group_names().len(), 15);
    }

    #[test]
    fn both_granularities_cover_the_same_codes() {
        let fine = SemTypeGroups::builtin(Granularity::Fine);
        let coarse = SemTypeGroups::builtin(Granularity::Coarse);
        assert!(fine.len() > 130);
        let a: HashSet<_> = fine.groups.keys().collect();
        let b: HashSet<_> = coarse.groups.keys().collect();
        assert_eq!(a, b);
    }

    #[test]
    fn duplicate_code_is_rejected() {
        let src = "SEMTYPE_CODE\tGROUP_NAME\ndsyn\tA\ndsyn\tB\n";
        let (g, report) = SemTypeGroups::from_reader(src.as_bytes()).unwrap();
        assert_eq!(g.group("dsyn"), "A");
        assert_eq!(report.rejected(), 1);
    }
}
