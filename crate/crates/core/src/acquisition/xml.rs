use chrono::Datelike;
use roxmltree::{Document, Node};
use serde::{Deserialize, Serialize};

use super::ArticleRecord;

pub const MIN_YEAR: i32 = 1800;

/// A record dropped from a response, with the reason.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkippedRecord {
    pub article_id: Option<String>,
    pub reason: String,
}

/// One response page: the endpoint's reported hit count (when present), the
/// well-formed records and the skipped ones.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ParsedPage {
    pub count: Option<u64>,
    pub records: Vec<ArticleRecord>,
    pub skipped: Vec<SkippedRecord>,
}

fn child<'a, 'i>(node: Node<'a, 'i>, name: &str) -> Option<Node<'a, 'i>> {
    node.children().find(|n| n.has_tag_name(name))
}

fn path<'a, 'i>(node: Node<'a, 'i>, names: &[&str]) -> Option<Node<'a, 'i>> {
    names.iter().try_fold(node, |n, name| child(n, name))
}

/// All descendant text, whitespace collapsed. Inline markup such as `<i>`
/// contributes its text.
fn text_of(node: Node) -> String {
    let raw: String = node.descendants().filter(|n| n.is_text()).filter_map(|n| n.text()).collect();
    raw.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn year_of(article: Node) -> Option<i32> {
    let date = article.descendants().find(|n| n.has_tag_name("PubDate"))?;
    if let Some(y) = child(date, "Year") {
        return text_of(y).parse().ok();
    }
    let medline = text_of(child(date, "MedlineDate")?);
    medline.get(..4)?.parse().ok()
}

fn parse_article(node: Node, range: (i32, i32), current_year: i32) -> Result<ArticleRecord, SkippedRecord> {
    let pmid = node
        .descendants()
        .find(|n| n.has_tag_name("PMID"))
        .map(text_of)
        .filter(|p| !p.is_empty());
    let skip = |reason: String| SkippedRecord {
        article_id: pmid.clone(),
        reason,
    };
    let Some(article_id) = pmid.clone() else {
        return Err(skip("missing PMID".into()));
    };
    let Some(article) = node.descendants().find(|n| n.has_tag_name("Article")) else {
        return Err(skip("missing Article element".into()));
    };
    let Some(pub_year) = year_of(article) else {
        return Err(skip("missing or unparseable publication year".into()));
    };
    if !(MIN_YEAR..=current_year).contains(&pub_year) {
        return Err(skip(format!("publication year {pub_year} outside [{MIN_YEAR}, {current_year}]")));
    }
    if !(range.0..=range.1).contains(&pub_year) {
        return Err(skip(format!("publication year {pub_year} outside requested {}..={}", range.0, range.1)));
    }
    let title = child(article, "ArticleTitle").map(text_of).unwrap_or_default();
    let abstract_sections = path(article, &["Abstract"])
        .map(|a| {
            a.children()
                .filter(|n| n.has_tag_name("AbstractText"))
                .map(|n| (n.attribute("Label").unwrap_or("").trim().to_string(), text_of(n)))
                .collect()
        })
        .unwrap_or_default();
    let language = child(article, "Language").map(text_of).unwrap_or_default();
    Ok(ArticleRecord {
        article_id,
        title,
        abstract_sections,
        pub_year,
        language,
    })
}

/// Parses a `PubmedArticleSet`-style document. Malformed records land in
/// `skipped`; only an unparseable document is an error (returned as text).
pub fn parse_article_set(xml: &str, range: (i32, i32)) -> Result<ParsedPage, String> {
    let doc = Document::parse(xml).map_err(|e| e.to_string())?;
    let root = doc.root_element();
    let count = root
        .descendants()
        .find(|n| n.has_tag_name("Count"))
        .map(|n| text_of(n).parse::<u64>().map_err(|e| format!("bad Count: {e}")))
        .transpose()?;
    let current_year = chrono::Utc::now().year();
    let mut page = ParsedPage {
        count,
        ..ParsedPage::default()
    };
    for node in root.descendants().filter(|n| n.has_tag_name("PubmedArticle")) {
        match parse_article(node, range, current_year) {
            Ok(r) => page.records.push(r),
            Err(s) => {
                log::warn!("skipping record {:?}: {}", s.article_id, s.reason);
                page.skipped.push(s);
            }
        }
    }
    Ok(page)
}
