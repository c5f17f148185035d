//! Text renderings of every tabular output. Each function returns the full
//! file contents so callers can write, compare or digest them.

use std::collections::HashMap;
use std::path::Path;

use indexmap::IndexMap;

use super::format::{fixed, IE_DECIMALS, PAIR_DECIMALS, PROPORTION_DECIMALS};
use super::relations::RelationDistribution;
use crate::corpus::{CorpusStats, SentenceId, SentenceIndex, TripleKey};
use crate::error::Result;
use crate::grouping::{RelationGroup, TypePairScore};
use crate::lexicon::{CueCategory, MatchResult};
use crate::metrics::{ScoredTriple, UncertaintyScore};
use crate::rhetoric::{SectionDistribution, SectionLabel};
use crate::tsv::{LoadReport, RowReader, TsvWriter};

pub const GROWTH_COLUMNS: [&str; 5] = ["YEAR", "PUBLICATIONS", "TOTAL_TRIPLES", "NOVEL_TRIPLES", "UNIQUE_CUMULATIVE"];
pub const SECTION_COLUMNS: [&str; 6] = [
    "LABEL",
    "SENTENCES",
    "HEDGING_SENTENCES",
    "CONFLICTING_SENTENCES",
    "HEDGING_CUES",
    "CONFLICTING_CUES",
];
pub const PAIR_TABLE_COLUMNS: [&str; 5] = ["Subject Type", "Object Type", "IE", "Uncertainty Rate", "SPO triple Example"];
pub const PAIRS_COLUMNS: [&str; 5] = ["SUBJECT_TYPE", "OBJECT_TYPE", "IE", "UNCERTAINTY_RATE", "EXAMPLE_TRIPLE"];
pub const TRIPLE_SCORE_COLUMNS: [&str; 7] = [
    "SUBJECT_CUI",
    "PREDICATE",
    "OBJECT_CUI",
    "IE",
    "RATE",
    "UNCERTAIN_SENTENCES",
    "TOTAL_SENTENCES",
];
pub const MATCH_COLUMNS: [&str; 4] = ["SENTENCE_ID", "MATCHED_PATTERNS", "HAS_HEDGING", "HAS_CONFLICTING"];
pub const LABEL_COLUMNS: [&str; 2] = ["SENTENCE_ID", "LABEL"];

pub fn relation_columns() -> Vec<&'static str> {
    let mut cols = vec!["YEAR", "PREDICATIONS"];
    cols.extend(RelationGroup::ALL.iter().map(|g| g.as_str()));
    cols
}

fn render<I, R>(delimiter: char, header: &[&str], rows: I) -> String
where
    I: IntoIterator<Item = R>,
    R: IntoIterator<Item = String>,
{
    let mut w = TsvWriter::from_writer(Vec::new(), delimiter);
    // writing into memory cannot fail
    w.row(header).expect("in-memory write");
    for r in rows {
        w.row(r).expect("in-memory write");
    }
    String::from_utf8(w.finish().expect("in-memory flush")).expect("fields are utf-8")
}

fn flag(b: bool) -> String {
    if b { "1" } else { "0" }.to_string()
}

pub fn growth_csv(stats: &CorpusStats) -> String {
    render(
        ',',
        &GROWTH_COLUMNS,
        stats.years().map(|(year, y)| {
            [
                year.to_string(),
                y.publication_count.to_string(),
                y.total_triple_count.to_string(),
                y.novel_triple_count.to_string(),
                y.unique_triple_count_cumulative.to_string(),
            ]
        }),
    )
}

pub fn relations_csv(dist: &RelationDistribution) -> String {
    render(
        ',',
        &relation_columns(),
        dist.years.keys().map(|&year| {
            let mut row = vec![year.to_string(), dist.year_total(year).to_string()];
            row.extend(RelationGroup::ALL.iter().map(|g| fixed(dist.proportion(year, *g), PROPORTION_DECIMALS)));
            row
        }),
    )
}

pub fn sections_csv(dist: &SectionDistribution, labels: &[SectionLabel]) -> String {
    render(
        ',',
        &SECTION_COLUMNS,
        labels.iter().map(|&label| {
            let h = dist.cell(label, CueCategory::Hedging);
            let c = dist.cell(label, CueCategory::Conflicting);
            [
                label.to_string(),
                dist.label_total(label).to_string(),
                h.sentences.to_string(),
                c.sentences.to_string(),
                h.cues.to_string(),
                c.cues.to_string(),
            ]
        }),
    )
}

/// The ranked table in the published layout: two decimals, top `k` rows.
pub fn pair_table_tsv(pairs: &[TypePairScore], k: usize) -> String {
    render(
        '\t',
        &PAIR_TABLE_COLUMNS,
        pairs.iter().take(k).map(|p| {
            [
                p.subject_group.clone(),
                p.object_group.clone(),
                fixed(p.score.ie, PAIR_DECIMALS),
                fixed(p.score.rate, PAIR_DECIMALS),
                p.example_display.clone(),
            ]
        }),
    )
}

/// Machine-readable ranking with full IE precision.
pub fn pairs_tsv(pairs: &[TypePairScore], k: usize) -> String {
    render(
        '\t',
        &PAIRS_COLUMNS,
        pairs.iter().take(k).map(|p| {
            [
                p.subject_group.clone(),
                p.object_group.clone(),
                fixed(p.score.ie, IE_DECIMALS),
                fixed(p.score.rate, IE_DECIMALS),
                p.example_display.clone(),
            ]
        }),
    )
}

pub fn triple_scores_tsv(scored: &[ScoredTriple]) -> String {
    render(
        '\t',
        &TRIPLE_SCORE_COLUMNS,
        scored.iter().map(|t| {
            [
                t.key.subject_cui.clone(),
                t.key.predicate.clone(),
                t.key.object_cui.clone(),
                fixed(t.score.ie, IE_DECIMALS),
                fixed(t.score.rate, IE_DECIMALS),
                t.score.uncertain_sentence_count.to_string(),
                t.score.total_sentence_count.to_string(),
            ]
        }),
    )
}

/// Reads `triple_scores.tsv`. The rate column is recomputed from the counts.
pub fn read_triple_scores(path: &Path) -> Result<(Vec<ScoredTriple>, LoadReport)> {
    let mut report = LoadReport::default();
    let mut out = Vec::new();
    for row in RowReader::open(path, b'\t', &TRIPLE_SCORE_COLUMNS)? {
        let row = row?;
        report.rows += 1;
        if row.fields.len() != TRIPLE_SCORE_COLUMNS.len() {
            report.reject(row.line, "expected 7 columns");
            continue;
        }
        let parsed = (
            row.get(3).parse::<f64>(),
            row.get(5).parse::<u64>(),
            row.get(6).parse::<u64>(),
        );
        let (Ok(ie), Ok(u), Ok(n)) = parsed else {
            report.reject(row.line, "unparseable IE or sentence counts");
            continue;
        };
        if u > n || n == 0 {
            report.reject(row.line, format!("inconsistent counts {u}/{n}"));
            continue;
        }
        out.push(ScoredTriple {
            key: TripleKey::new(row.get(0), row.get(1), row.get(2)),
            score: UncertaintyScore::new(ie, u, n),
        });
        report.accepted += 1;
    }
    Ok((out, report))
}

/// One row per sentence in store order.
pub fn matches_tsv(sentences: &SentenceIndex, matches: &HashMap<SentenceId, MatchResult>) -> String {
    render(
        '\t',
        &MATCH_COLUMNS,
        sentences.iter().map(|s| match matches.get(&s.sentence_id) {
            Some(m) => [
                s.sentence_id.to_string(),
                m.patterns().collect::<Vec<_>>().join(";"),
                flag(m.has_hedging),
                flag(m.has_conflicting),
            ],
            None => [s.sentence_id.to_string(), String::new(), flag(false), flag(false)],
        }),
    )
}

pub fn labels_tsv(labels: &IndexMap<SentenceId, SectionLabel>) -> String {
    render(
        '\t',
        &LABEL_COLUMNS,
        labels.iter().map(|(id, l)| [id.to_string(), l.to_string()]),
    )
}
