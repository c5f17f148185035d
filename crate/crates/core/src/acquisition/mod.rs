//! Fetching article metadata and abstracts from a MEDLINE-style HTTP
//! endpoint, sentence splitting, and conversion to the corpus TSV format.

mod fetch;
mod split;
mod xml;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{write_sentences, SentenceIndex};
use crate::error::Result;
use crate::tsv::TsvWriter;

pub use fetch::{fetch_articles, FetchConfig, FetchOutcome, API_KEY_ENV};
pub use split::{split_sentences, split_text, SplitSentence, ABBREVIATIONS, TITLE_HEADER};
pub use xml::{parse_article_set, ParsedPage, SkippedRecord, MIN_YEAR};

pub const ARTICLE_COLUMNS: [&str; 4] = ["PMID", "PUB_YEAR", "LANGUAGE", "TITLE"];
pub const SENTENCES_OUT: &str = "SENTENCES.tsv";
pub const ARTICLES_OUT: &str = "ARTICLES.tsv";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArticleRecord {
    pub article_id: String,
    pub title: String,
    /// `(header, body)` in document order; unstructured abstracts have a
    /// single section with an empty header.
    pub abstract_sections: Vec<(String, String)>,
    pub pub_year: i32,
    pub language: String,
}

/// Writes `SENTENCES.tsv` (the ingestion format) and `ARTICLES.tsv` into
/// `out_dir`. Returns the number of sentences written.
pub fn write_corpus(records: &[ArticleRecord], out_dir: &Path) -> Result<usize> {
    let sentences: SentenceIndex = records
        .iter()
        .flat_map(split_sentences)
        .map(|s| s.record)
        .collect();
    write_sentences(&out_dir.join(SENTENCES_OUT), &sentences)?;

    let mut w = TsvWriter::create(&out_dir.join(ARTICLES_OUT))?;
    w.row(ARTICLE_COLUMNS)?;
    for r in records {
        w.row([r.article_id.as_str(), &r.pub_year.to_string(), &r.language, &r.title])?;
    }
    w.finish()?;
    Ok(sentences.len())
}
