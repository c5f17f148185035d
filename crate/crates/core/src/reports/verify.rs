//! Spot checks of an emitted bundle. Randomly chosen cells are recomputed
//! from the store with straightforward nested loops that share no counting
//! code with the pipeline, then compared as printed strings.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::format::{fixed, PAIR_DECIMALS, PROPORTION_DECIMALS};
use super::pipeline::{
    Manifest, PipelineConfig, Resources, GROWTH_CSV, PAIRS_CONFLICTING_TSV, PAIRS_HEDGING_TSV, RELATIONS_CSV,
    SECTIONS_CSV,
};
use crate::corpus::{bytes_digest, ArticleId, PredicationRecord, SentenceId, Store, TripleKey};
use crate::error::{Error, Result};
use crate::grouping::{is_informative, RelationGroup};
use crate::lexicon::CueCategory;
use crate::metrics::CategoryScope;
use crate::rhetoric::SectionLabel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CellCheck {
    pub report: String,
    pub cell: String,
    pub expected: String,
    pub found: String,
}

impl CellCheck {
    pub fn passed(&self) -> bool {
        self.expected == self.found
    }
}

/// Header and data rows of a delimited report (comma for `.csv`, tab otherwise).
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let delimiter = if path.extension().is_some_and(|e| e == "csv") { ',' } else { '\t' };
        let mut lines = text.lines().map(|l| l.split(delimiter).map(str::to_string).collect::<Vec<_>>());
        let header = lines.next().unwrap_or_default();
        Ok(Self {
            header,
            rows: lines.collect(),
        })
    }

    pub fn row_by_key(&self, key: &str) -> Option<&Vec<String>> {
        self.rows.iter().find(|r| r.first().is_some_and(|k| k == key))
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

struct Brute<'a> {
    store: &'a Store,
    res: &'a Resources,
    config: &'a PipelineConfig,
}

impl Brute<'_> {
    fn year(&self, p: &PredicationRecord) -> Option<i32> {
        self.store.sentences.get(p.sentence_id.as_str()).map(|s| s.pub_year)
    }

    fn dated(&self) -> Vec<(TripleKey, i32, &PredicationRecord)> {
        self.store
            .predications
            .iter()
            .filter_map(|p| self.year(p).map(|y| (p.key(), y, p)))
            .collect()
    }

    fn growth(&self, year: i32, column: &str) -> String {
        let dated = self.dated();
        let n = match column {
            "PUBLICATIONS" => {
                let mut ids: Vec<&ArticleId> = Vec::new();
                for s in self.store.sentences.iter().filter(|s| s.pub_year == year) {
                    if !ids.contains(&&s.article_id) {
                        ids.push(&s.article_id);
                    }
                }
                ids.len()
            }
            "TOTAL_TRIPLES" => dated.iter().filter(|d| d.1 == year).count(),
            "NOVEL_TRIPLES" => (0..dated.len())
                .filter(|&i| {
                    dated[i].1 == year
                        && !(0..dated.len()).any(|j| {
                            dated[j].0 == dated[i].0 && (dated[j].1 < year || (dated[j].1 == year && j < i))
                        })
                })
                .count(),
            "UNIQUE_CUMULATIVE" => (0..dated.len())
                .filter(|&i| dated[i].1 <= year && !(0..i).any(|j| dated[j].0 == dated[i].0 && dated[j].1 <= year))
                .count(),
            _ => return "?".into(),
        };
        n.to_string()
    }

    fn relation(&self, year: i32, column: &str) -> String {
        let in_year: Vec<_> = self.dated().into_iter().filter(|d| d.1 == year).collect();
        if column == "PREDICATIONS" {
            return in_year.len().to_string();
        }
        let Ok(group) = column.parse::<RelationGroup>() else { return "?".into() };
        let hits = in_year.iter().filter(|d| self.res.relations.group(&d.2.predicate) == group).count();
        let share = if in_year.is_empty() { 0.0 } else { hits as f64 / in_year.len() as f64 };
        fixed(share, PROPORTION_DECIMALS)
    }

    fn section(&self, label: SectionLabel, column: &str) -> String {
        let labels = self.res.classifier.classify_corpus(&self.store.sentences);
        let (mut total, mut hs, mut cs, mut hc, mut cc) = (0, 0, 0, 0, 0);
        for s in self.store.sentences.iter() {
            if labels.get(&s.sentence_id) != Some(&label) {
                continue;
            }
            total += 1;
            let m = self.res.lexicon.match_text(s.sentence_id.clone(), &s.text);
            let h = m.matched.iter().filter(|c| c.category == CueCategory::Hedging).count();
            let c = m.matched.iter().filter(|c| c.category == CueCategory::Conflicting).count();
            hs += usize::from(h > 0);
            cs += usize::from(c > 0);
            hc += h;
            cc += c;
        }
        match column {
            "SENTENCES" => total,
            "HEDGING_SENTENCES" => hs,
            "CONFLICTING_SENTENCES" => cs,
            "HEDGING_CUES" => hc,
            "CONFLICTING_CUES" => cc,
            _ => return "?".into(),
        }
        .to_string()
    }

    /// IE and rate of one type pair, both at table precision.
    fn pair(&self, scope: CategoryScope, subject_group: &str, object_group: &str) -> (String, String) {
        let preds: Vec<&PredicationRecord> = self
            .store
            .predications
            .iter()
            .filter(|p| self.config.all_relations || is_informative(p, &self.res.relations))
            .collect();
        let mut keys: Vec<TripleKey> = Vec::new();
        for p in &preds {
            if !keys.contains(&p.key()) {
                keys.push(p.key());
            }
        }
        let (mut ie, mut uncertain, mut total) = (0.0, 0u64, 0u64);
        for key in &keys {
            let members: Vec<&&PredicationRecord> = preds.iter().filter(|p| p.key() == *key).collect();
            let mut type_counts: Vec<((String, String), usize)> = Vec::new();
            let mut sentences: Vec<&SentenceId> = Vec::new();
            for p in &members {
                let pair = (p.subject_semtype.clone(), p.object_semtype.clone());
                match type_counts.iter_mut().find(|(t, _)| *t == pair) {
                    Some((_, n)) => *n += 1,
                    None => type_counts.push((pair, 1)),
                }
                if !sentences.contains(&&p.sentence_id) {
                    sentences.push(&p.sentence_id);
                }
            }
            let best = type_counts
                .iter()
                .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
                .map(|(t, _)| t.clone())
                .unwrap_or_default();
            if self.res.semtypes.group(&best.0) != subject_group || self.res.semtypes.group(&best.1) != object_group {
                continue;
            }
            let (mut t_ie, mut t_u) = (0.0, 0u64);
            for id in &sentences {
                let text = self.store.sentences.get(id.as_str()).map_or("", |s| s.text.as_str());
                let m = self.res.lexicon.match_text((*id).clone(), text);
                let in_scope: Vec<_> = m.matched.iter().filter(|c| scope.includes(c.category)).collect();
                t_ie += in_scope.iter().map(|c| self.res.table.ie(&c.pattern).unwrap_or(0.0)).sum::<f64>();
                t_u += u64::from(!in_scope.is_empty());
            }
            if t_u == 0 && !self.config.include_certain {
                continue;
            }
            ie += t_ie;
            uncertain += t_u;
            total += sentences.len() as u64;
        }
        let rate = if total == 0 { 0.0 } else { uncertain as f64 / total as f64 };
        (fixed(ie, PAIR_DECIMALS), fixed(rate, PAIR_DECIMALS))
    }
}

fn pick(rng: &mut ChaCha8Rng, n: usize) -> usize {
    rng.gen_range(0..n)
}

/// Recomputes `cells` random cells of each tabular report in `out_dir` and
/// checks every output digest against the manifest.
pub fn verify_reports(store: &Store, out_dir: &Path, seed: u64, cells: usize) -> Result<Vec<CellCheck>> {
    let manifest = Manifest::read(out_dir)?;
    let config = PipelineConfig::from_pairs(&manifest.config)?;
    let res = Resources::load(&config, &store.sentences)?;
    let brute = Brute {
        store,
        res: &res,
        config: &config,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    for (name, digest) in &manifest.outputs {
        let path = out_dir.join(name);
        let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
        checks.push(CellCheck {
            report: name.clone(),
            cell: "sha256".into(),
            expected: digest.clone(),
            found: bytes_digest(&bytes),
        });
    }

    // samples columns first..end (end defaults to the table width)
    let mut sample = |name: &str, first: usize, end: Option<usize>, check: &dyn Fn(&[String], &str) -> String| -> Result<()> {
        let table = Table::read(&out_dir.join(name))?;
        let end = end.unwrap_or(table.header.len()).min(table.header.len());
        if table.rows.is_empty() || end <= first {
            return Ok(());
        }
        for _ in 0..cells {
            let r = pick(&mut rng, table.rows.len());
            let c = first + pick(&mut rng, end - first);
            let row = &table.rows[r];
            checks.push(CellCheck {
                report: name.to_string(),
                cell: format!("row {} column {}", r + 1, table.header[c]),
                expected: check(row, &table.header[c]),
                found: row.get(c).cloned().unwrap_or_default(),
            });
        }
        Ok(())
    };

    let year = |row: &[String]| row[0].parse::<i32>().unwrap_or(i32::MIN);
    sample(GROWTH_CSV, 1, None, &|row, col| brute.growth(year(row), col))?;
    sample(RELATIONS_CSV, 1, None, &|row, col| brute.relation(year(row), col))?;
    sample(SECTIONS_CSV, 1, None, &|row, col| match row[0].parse::<SectionLabel>() {
        Ok(label) => brute.section(label, col),
        Err(_) => "?".into(),
    })?;
    for (name, scope) in [
        (PAIRS_HEDGING_TSV, CategoryScope::Hedging),
        (PAIRS_CONFLICTING_TSV, CategoryScope::Conflicting),
    ] {
        // IE and rate columns; the example triple is not a computed value
        sample(name, 2, Some(4), &|row, col| {
            let (ie, rate) = brute.pair(scope, &row[0], &row[1]);
            if col == "IE" {
                ie
            } else {
                rate
            }
        })?;
    }
    Ok(checks)
}

/// Expected values for a bundle built from a specific corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetFile {
    pub description: String,
    pub targets: Vec<Target>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Target {
    /// A manifest summary count.
    Summary { key: String, expected: u64 },
    /// The value in `column` of the row whose first field is `row`.
    Cell {
        report: String,
        row: String,
        column: String,
        expected: String,
    },
    /// `column` at row `to` divided by `column` at row `from`.
    Ratio {
        report: String,
        column: String,
        from: String,
        to: String,
        expected: f64,
        tolerance: f64,
    },
    /// Leading fields of the data row at 1-based `rank`.
    Rank {
        report: String,
        rank: usize,
        expected: Vec<String>,
    },
}

pub fn check_targets(out_dir: &Path, targets: &TargetFile) -> Result<Vec<CellCheck>> {
    let manifest = Manifest::read(out_dir)?;
    let mut out = Vec::new();
    for t in &targets.targets {
        let check = match t {
            Target::Summary { key, expected } => CellCheck {
                report: "manifest.json".into(),
                cell: format!("summary {key}"),
                expected: expected.to_string(),
                found: manifest.summary.get(key).map_or("missing".into(), u64::to_string),
            },
            Target::Cell {
                report,
                row,
                column,
                expected,
            } => {
                let table = Table::read(&out_dir.join(report))?;
                let found = table
                    .column(column)
                    .and_then(|c| table.row_by_key(row).and_then(|r| r.get(c).cloned()))
                    .unwrap_or_else(|| "missing".into());
                CellCheck {
                    report: report.clone(),
                    cell: format!("row {row} column {column}"),
                    expected: expected.clone(),
                    found,
                }
            }
            Target::Ratio {
                report,
                column,
                from,
                to,
                expected,
                tolerance,
            } => {
                let table = Table::read(&out_dir.join(report))?;
                let value = |key: &str| -> Option<f64> {
                    let c = table.column(column)?;
                    table.row_by_key(key)?.get(c)?.parse().ok()
                };
                let found = match (value(from), value(to)) {
                    (Some(a), Some(b)) if a > 0.0 => b / a,
                    _ => f64::NAN,
                };
                CellCheck {
                    report: report.clone(),
                    cell: format!("{column} {to}/{from} within {tolerance}"),
                    expected: expected.to_string(),
                    found: if (found - expected).abs() <= *tolerance {
                        expected.to_string()
                    } else {
                        found.to_string()
                    },
                }
            }
            Target::Rank { report, rank, expected } => {
                let table = Table::read(&out_dir.join(report))?;
                let found = table
                    .rows
                    .get(rank.saturating_sub(1))
                    .map(|r| r.iter().take(expected.len()).cloned().collect::<Vec<_>>().join(" | "))
                    .unwrap_or_else(|| "missing".into());
                CellCheck {
                    report: report.clone(),
                    cell: format!("rank {rank}"),
                    expected: expected.join(" | "),
                    found,
                }
            }
        };
        out.push(check);
    }
    Ok(out)
}

pub fn read_targets(path: &Path) -> Result<TargetFile> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}
