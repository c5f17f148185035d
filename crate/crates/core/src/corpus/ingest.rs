//! Loading of SENTENCES.tsv, PREDICATIONS.tsv and ALIASES.tsv.

use std::collections::{HashMap, HashSet};
use std::io::Read;
use std::path::Path;

use indexmap::IndexMap;

use super::model::{
    is_valid_predicate, ArticleId, Location, PredicationId, PredicationRecord, SentenceId,
    SentenceRecord,
};
use crate::error::Result;
use crate::tsv::{LoadReport, RowReader};

pub const SENTENCE_COLUMNS: [&str; 6] = [
    "SENTENCE_ID",
    "PMID",
    "PUB_YEAR",
    "LOCATION",
    "SECTION_HEADER",
    "SENTENCE_TEXT",
];

pub const PREDICATION_COLUMNS: [&str; 10] = [
    "PREDICATION_ID",
    "SENTENCE_ID",
    "PMID",
    "PREDICATE",
    "SUBJECT_CUI",
    "SUBJECT_NAME",
    "SUBJECT_SEMTYPE",
    "OBJECT_CUI",
    "OBJECT_NAME",
    "OBJECT_SEMTYPE",
];

pub const ALIAS_COLUMNS: [&str; 2] = ["OLD_PMID", "CANONICAL_PMID"];

/// Sentences keyed by id, in ingestion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SentenceIndex {
    records: IndexMap<SentenceId, SentenceRecord>,
}

impl SentenceIndex {
    pub fn new() -> Self {
        Self::default()
    }

    /// Inserts unless the id is already present; returns whether it was inserted.
    pub fn insert(&mut self, record: SentenceRecord) -> bool {
        if self.records.contains_key(&record.sentence_id) {
            return false;
        }
        self.records.insert(record.sentence_id.clone(), record);
        true
    }

    pub fn get(&self, id: &str) -> Option<&SentenceRecord> {
        self.records.get(id)
    }

    pub fn contains(&self, id: &str) -> bool {
        self.records.contains_key(id)
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &SentenceRecord> {
        self.records.values()
    }
}

impl FromIterator<SentenceRecord> for SentenceIndex {
    fn from_iter<T: IntoIterator<Item = SentenceRecord>>(iter: T) -> Self {
        let mut index = SentenceIndex::new();
        for r in iter {
            index.insert(r);
        }
        index
    }
}

/// Predications in ingestion order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PredicationSet {
    records: Vec<PredicationRecord>,
}

impl PredicationSet {
    pub fn new(records: Vec<PredicationRecord>) -> Self {
        Self { records }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PredicationRecord> {
        self.records.iter()
    }

    pub fn as_slice(&self) -> &[PredicationRecord] {
        &self.records
    }

    pub fn into_inner(self) -> Vec<PredicationRecord> {
        self.records
    }
}

impl<'a> IntoIterator for &'a PredicationSet {
    type Item = &'a PredicationRecord;
    type IntoIter = std::slice::Iter<'a, PredicationRecord>;

    fn into_iter(self) -> Self::IntoIter {
        self.records.iter()
    }
}

impl FromIterator<PredicationRecord> for PredicationSet {
    fn from_iter<T: IntoIterator<Item = PredicationRecord>>(iter: T) -> Self {
        Self {
            records: iter.into_iter().collect(),
        }
    }
}

/// Maps superseded article ids onto a canonical id.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AliasMap(HashMap<String, String>);

impl AliasMap {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, old: impl Into<String>, canonical: impl Into<String>) {
        self.0.insert(old.into(), canonical.into());
    }

    pub fn resolve(&self, id: &str) -> ArticleId {
        ArticleId::new(self.0.get(id).map(String::as_str).unwrap_or(id))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn load(path: &Path) -> Result<(Self, LoadReport)> {
        let rows = RowReader::open(path, b'\t', &ALIAS_COLUMNS)?;
        let mut map = AliasMap::new();
        let mut report = LoadReport::default();
        for row in rows {
            let row = row?;
            report.rows += 1;
            if row.fields.len() != ALIAS_COLUMNS.len() {
                report.reject(row.line, format!("expected 2 columns, found {}", row.fields.len()));
                continue;
            }
            let (old, canonical) = (row.get(0).trim(), row.get(1).trim());
            if old.is_empty() || canonical.is_empty() {
                report.reject(row.line, "empty article id");
                continue;
            }
            if map.0.contains_key(old) {
                report.reject(row.line, format!("duplicate alias for {old}"));
                continue;
            }
            map.insert(old, canonical);
            report.accepted += 1;
        }
        Ok((map, report))
    }
}

pub fn ingest_sentences(path: &Path, aliases: Option<&AliasMap>) -> Result<(SentenceIndex, LoadReport)> {
    let rows = RowReader::open(path, b'\t', &SENTENCE_COLUMNS)?;
    sentences_from_rows(rows, aliases)
}

pub fn ingest_sentences_from_reader<R: Read>(
    reader: R,
    aliases: Option<&AliasMap>,
) -> Result<(SentenceIndex, LoadReport)> {
    let rows = RowReader::new(reader, Path::new("<reader>"), b'\t', &SENTENCE_COLUMNS)?;
    sentences_from_rows(rows, aliases)
}

fn sentences_from_rows<R: Read>(
    rows: RowReader<R>,
    aliases: Option<&AliasMap>,
) -> Result<(SentenceIndex, LoadReport)> {
    let mut index = SentenceIndex::new();
    let mut report = LoadReport::default();
    for row in rows {
        let row = row?;
        report.rows += 1;
        if row.fields.len() != SENTENCE_COLUMNS.len() {
            report.reject(
                row.line,
                format!("expected {} columns, found {}", SENTENCE_COLUMNS.len(), row.fields.len()),
            );
            continue;
        }
        let id = row.get(0).trim();
        if id.is_empty() {
            report.reject(row.line, "empty SENTENCE_ID");
            continue;
        }
        let pmid = row.get(1).trim();
        if pmid.is_empty() {
            report.reject(row.line, "empty PMID");
            continue;
        }
        let Ok(pub_year) = row.get(2).trim().parse::<i32>() else {
            report.reject(row.line, format!("unparseable PUB_YEAR `{}`", row.get(2)));
            continue;
        };
        let Some(location) = Location::from_code(row.get(3)) else {
            report.reject(row.line, format!("LOCATION must be ti or ab, found `{}`", row.get(3)));
            continue;
        };
        let text = row.get(5);
        if text.trim().is_empty() {
            report.reject(row.line, "empty SENTENCE_TEXT");
            continue;
        }
        if index.contains(id) {
            report.reject(row.line, format!("duplicate SENTENCE_ID {id}"));
            continue;
        }
        let header = row.get(4).trim();
        let article_id = match aliases {
            Some(a) => a.resolve(pmid),
            None => ArticleId::new(pmid),
        };
        index.insert(SentenceRecord {
            sentence_id: SentenceId::new(id),
            article_id,
            pub_year,
            location,
            section_header: (!header.is_empty()).then(|| header.to_string()),
            text: text.to_string(),
        });
        report.accepted += 1;
    }
    Ok((index, report))
}

pub fn ingest_predications(
    path: &Path,
    sentences: &SentenceIndex,
    aliases: Option<&AliasMap>,
) -> Result<(PredicationSet, LoadReport)> {
    let rows = RowReader::open(path, b'\t', &PREDICATION_COLUMNS)?;
    predications_from_rows(rows, sentences, aliases)
}

pub fn ingest_predications_from_reader<R: Read>(
    reader: R,
    sentences: &SentenceIndex,
    aliases: Option<&AliasMap>,
) -> Result<(PredicationSet, LoadReport)> {
    let rows = RowReader::new(reader, Path::new("<reader>"), b'\t', &PREDICATION_COLUMNS)?;
    predications_from_rows(rows, sentences, aliases)
}

fn predications_from_rows<R: Read>(
    rows: RowReader<R>,
    sentences: &SentenceIndex,
    aliases: Option<&AliasMap>,
) -> Result<(PredicationSet, LoadReport)> {
    let mut records = Vec::new();
    let mut ids: HashSet<String> = HashSet::new();
    let mut seen: HashSet<Vec<String>> = HashSet::new();
    let mut report = LoadReport::default();

    for row in rows {
        let row = row?;
        report.rows += 1;
        if row.fields.len() != PREDICATION_COLUMNS.len() {
            report.reject(
                row.line,
                format!("expected {} columns, found {}", PREDICATION_COLUMNS.len(), row.fields.len()),
            );
            continue;
        }
        let f = |i: usize| row.get(i).trim().to_string();
        let id = f(0);
        if id.is_empty() {
            report.reject(row.line, "empty PREDICATION_ID");
            continue;
        }
        let sentence_id = f(1);
        let Some(sentence) = sentences.get(&sentence_id) else {
            report.reject(row.line, format!("SENTENCE_ID {sentence_id} does not resolve"));
            continue;
        };
        // SemMedDB spells a few comparison predicates in lowercase
        let predicate = f(3).to_ascii_uppercase();
        if !is_valid_predicate(&predicate) {
            report.reject(row.line, format!("malformed PREDICATE `{}`", row.get(3)));
            continue;
        }
        let article_id = match aliases {
            Some(a) => a.resolve(&f(2)),
            None => ArticleId::new(f(2)),
        };
        if article_id != sentence.article_id {
            report.reject(
                row.line,
                format!("PMID {article_id} disagrees with sentence PMID {}", sentence.article_id),
            );
            continue;
        }
        if f(4).is_empty() || f(7).is_empty() {
            report.reject(row.line, "empty concept identifier");
            continue;
        }
        if ids.contains(&id) {
            report.reject(row.line, format!("duplicate PREDICATION_ID {id}"));
            continue;
        }
        let record = PredicationRecord {
            predication_id: PredicationId::new(id.clone()),
            sentence_id: sentence.sentence_id.clone(),
            article_id,
            subject_cui: f(4),
            subject_name: f(5),
            subject_semtype: f(6),
            predicate,
            object_cui: f(7),
            object_name: f(8),
            object_semtype: f(9),
        };
        ids.insert(id);
        let content: Vec<String> = record.content().iter().map(|s| s.to_string()).collect();
        if !seen.insert(content) {
            report.collapsed += 1;
            continue;
        }
        records.push(record);
        report.accepted += 1;
    }
    Ok((PredicationSet::new(records), report))
}
