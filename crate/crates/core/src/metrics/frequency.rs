//! Cue frequencies over a sentence collection and the entropy weight derived
//! from them.

use std::fmt;
use std::io::Read;
use std::path::Path;
use std::str::FromStr;

use indexmap::IndexMap;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lexicon::{tokenize, CueCategory, CueEntry, CuePattern, Lexicon};
use crate::tsv::{RowReader, TsvWriter};

/// Shipped reference sentence count paired with the default lexicon.
pub const DEFAULT_PROPERTIES: &str = include_str!("../../data/lexicon_table1.properties");

pub const FREQUENCY_COLUMNS: [&str; 5] = ["PATTERN", "CATEGORY", "FREQUENCY", "TOTAL_SENTENCES", "IE"];

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LogBase {
    #[default]
    Ten,
    E,
    Two,
}

impl LogBase {
    pub fn log(self, x: f64) -> f64 {
        match self {
            LogBase::Ten => x.log10(),
            LogBase::E => x.ln(),
            LogBase::Two => x.log2(),
        }
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LogBase::Ten => "10",
            LogBase::E => "e",
            LogBase::Two => "2",
        })
    }
}

impl FromStr for LogBase {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "10" => Ok(LogBase::Ten),
            "e" | "E" => Ok(LogBase::E),
            "2" => Ok(LogBase::Two),
            other => Err(Error::Invalid(format!("log base must be 10, e or 2, found `{other}`"))),
        }
    }
}

/// `-p * log(p)`, with the limit value 0 at p = 0.
pub fn entropy_weight(p: f64, base: LogBase) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * base.log(p)
}

/// Solves `-(F/N) * log(F/N) = target` for N by bisection on `[lo, hi]`.
///
/// The weight is monotone in N wherever F/N stays below 1/e, which holds for
/// any realistic cue frequency.
pub fn back_solve_total(frequency: u64, target: f64, base: LogBase, lo: f64, hi: f64) -> Result<f64> {
    let f = |n: f64| entropy_weight(frequency as f64 / n, base) - target;
    let (mut a, mut b) = (lo, hi);
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoRoot { lo, hi });
    }
    let mut fa = fa;
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        let fm = f(mid);
        if fm == 0.0 || (b - a) <= f64::EPSILON * mid {
            return Ok(mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    Ok(0.5 * (a + b))
}

/// The reference sentence count shipped next to the default lexicon.
pub fn default_total_sentences() -> u64 {
    DEFAULT_PROPERTIES
        .lines()
        .filter_map(|l| l.split_once('='))
        .find(|(k, _)| k.trim() == "total_sentences")
        .and_then(|(_, v)| v.trim().parse().ok())
        .expect("shipped properties carry total_sentences")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyRow {
    pub category: CueCategory,
    pub frequency: u64,
}

/// Sentence-level cue counts plus the sentence total they were taken over.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrequencyTable {
    total: u64,
    rows: IndexMap<String, FrequencyRow>,
    base: LogBase,
}

impl FrequencyTable {
    pub fn new(total: u64, rows: IndexMap<String, FrequencyRow>, base: LogBase) -> Result<Self> {
        if total == 0 {
            return Err(Error::EmptyCorpus);
        }
        if let Some((pattern, row)) = rows.iter().find(|(_, r)| r.frequency > total) {
            return Err(Error::FrequencyExceedsTotal {
                pattern: pattern.clone(),
                frequency: row.frequency,
                total,
            });
        }
        Ok(Self { total, rows, base })
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn base(&self) -> LogBase {
        self.base
    }

    pub fn with_base(mut self, base: LogBase) -> Self {
        self.base = base;
        self
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn frequency(&self, pattern: &str) -> Option<u64> {
        self.rows.get(pattern).map(|r| r.frequency)
    }

    pub fn category(&self, pattern: &str) -> Option<CueCategory> {
        self.rows.get(pattern).map(|r| r.category)
    }

    pub fn probability(&self, pattern: &str) -> Option<f64> {
        self.frequency(pattern).map(|f| f as f64 / self.total as f64)
    }

    /// Entropy weight of one pattern.
    pub fn ie(&self, pattern: &str) -> Option<f64> {
        self.probability(pattern).map(|p| entropy_weight(p, self.base))
    }

    pub fn rows(&self) -> impl Iterator<Item = (&str, &FrequencyRow)> {
        self.rows.iter().map(|(k, v)| (k.as_str(), v))
    }

    /// Field-wise sum with a table over a disjoint set of sentences.
    pub fn merge(&mut self, other: &FrequencyTable) -> Result<()> {
        if self.rows.len() != other.rows.len()
            || self
                .rows
                .iter()
                .zip(other.rows.iter())
                .any(|((a, ra), (b, rb))| a != b || ra.category != rb.category)
        {
            return Err(Error::TableMismatch);
        }
        self.total += other.total;
        for (row, o) in self.rows.values_mut().zip(other.rows.values()) {
            row.frequency += o.frequency;
        }
        Ok(())
    }

    /// Patterns and categories as a lexicon, for matching against a table
    /// read back from disk.
    pub fn lexicon(&self) -> Result<Lexicon> {
        let entries = self
            .rows
            .iter()
            .map(|(p, r)| {
                Ok(CueEntry {
                    pattern: CuePattern::parse(p)?,
                    category: r.category,
                    reference_frequency: Some(r.frequency),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Lexicon::new(entries))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = TsvWriter::create_with(path, ',')?;
        w.row(FREQUENCY_COLUMNS)?;
        let total = self.total.to_string();
        for (pattern, row) in &self.rows {
            w.row([
                pattern.as_str(),
                row.category.as_str(),
                &row.frequency.to_string(),
                &total,
                &format!("{:.8}", self.ie(pattern).unwrap_or(0.0)),
            ])?;
        }
        w.finish()?;
        Ok(())
    }

    pub fn read(path: &Path, base: LogBase) -> Result<Self> {
        let rows = RowReader::open(path, b',', &FREQUENCY_COLUMNS)?;
        Self::from_rows(rows, base)
    }

    pub fn from_reader<R: Read>(reader: R, base: LogBase) -> Result<Self> {
        let rows = RowReader::new(reader, Path::new("<frequency table>"), b',', &FREQUENCY_COLUMNS)?;
        Self::from_rows(rows, base)
    }

    fn from_rows<R: Read>(rows: RowReader<R>, base: LogBase) -> Result<Self> {
        let mut total = None;
        let mut out = IndexMap::new();
        for row in rows {
            let row = row?;
            let bad = |what: &str| Error::Invalid(format!("frequency table line {}: {what}", row.line));
            if row.fields.len() != FREQUENCY_COLUMNS.len() {
                return Err(bad("wrong column count"));
            }
            let category: CueCategory = row.get(1).parse()?;
            let frequency: u64 = row.get(2).trim().parse().map_err(|_| bad("bad FREQUENCY"))?;
            let n: u64 = row.get(3).trim().parse().map_err(|_| bad("bad TOTAL_SENTENCES"))?;
            if *total.get_or_insert(n) != n {
                return Err(bad("TOTAL_SENTENCES differs between rows"));
            }
            let pattern = CuePattern::parse(row.get(0))?;
            out.insert(pattern.as_str().to_string(), FrequencyRow { category, frequency });
        }
        Self::new(total.unwrap_or(0), out, base)
    }
}

/// Mergeable accumulator; a partition may be empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyCounter {
    sentences: u64,
    counts: Vec<u64>,
}

impl FrequencyCounter {
    pub fn new(lexicon: &Lexicon) -> Self {
        Self {
            sentences: 0,
            counts: vec![0; lexicon.len()],
        }
    }

    pub fn add_tokens(&mut self, lexicon: &Lexicon, tokens: &[String]) {
        self.sentences += 1;
        for (count, entry) in self.counts.iter_mut().zip(lexicon.entries()) {
            if entry.pattern.matches(tokens) {
                *count += 1;
            }
        }
    }

    pub fn add_text(&mut self, lexicon: &Lexicon, text: &str) {
        self.add_tokens(lexicon, &tokenize(text));
    }

    pub fn merge(&mut self, other: &FrequencyCounter) {
        self.sentences += other.sentences;
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
    }

    pub fn sentences(&self) -> u64 {
        self.sentences
    }

    pub fn finish(&self, lexicon: &Lexicon, base: LogBase) -> Result<FrequencyTable> {
        let rows = lexicon
            .entries()
            .iter()
            .zip(&self.counts)
            .map(|(e, &frequency)| {
                (
                    e.pattern.as_str().to_string(),
                    FrequencyRow {
                        category: e.category,
                        frequency,
                    },
                )
            })
            .collect();
        FrequencyTable::new(self.sentences, rows, base)
    }
}

/// Counts, for each pattern, the sentences in which it matches at least once.
pub fn build_frequency_table<I, S>(sentences: I, lexicon: &Lexicon) -> Result<FrequencyTable>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut counter = FrequencyCounter::new(lexicon);
    for s in sentences {
        counter.add_text(lexicon, s.as_ref());
    }
    counter.finish(lexicon, LogBase::Ten)
}

/// Same result as [`build_frequency_table`], counted over `partitions`
/// contiguous chunks in parallel and merged.
pub fn build_frequency_table_parallel<S>(
    sentences: &[S],
    lexicon: &Lexicon,
    partitions: usize,
) -> Result<FrequencyTable>
where
    S: AsRef<str> + Sync,
{
    let chunk = sentences.len().div_ceil(partitions.max(1)).max(1);
    let merged = sentences
        .par_chunks(chunk)
        .map(|part| {
            let mut c = FrequencyCounter::new(lexicon);
            for s in part {
                c.add_text(lexicon, s.as_ref());
            }
            c
        })
        .reduce(
            || FrequencyCounter::new(lexicon),
            |mut a, b| {
                a.merge(&b);
                a
            },
        );
    merged.finish(lexicon, LogBase::Ten)
}

/// Table built from the lexicon's shipped reference frequencies.
pub fn reference_frequency_table(lexicon: &Lexicon, total: u64) -> Result<FrequencyTable> {
    let rows = lexicon
        .entries()
        .iter()
        .map(|e| {
            let frequency = e
                .reference_frequency
                .ok_or_else(|| Error::MissingReferenceFrequency(e.pattern.as_str().to_string()))?;
            Ok((
                e.pattern.as_str().to_string(),
                FrequencyRow {
                    category: e.category,
                    frequency,
                },
            ))
        })
        .collect::<Result<IndexMap<_, _>>>()?;
    FrequencyTable::new(total, rows, LogBase::Ten)
}

/// Default lexicon with its reference frequencies and shipped sentence total.
pub fn builtin_table1() -> FrequencyTable {
    reference_frequency_table(&Lexicon::default_lexicon(), default_total_sentences())
        .expect("shipped lexicon has reference frequencies")
}
