//! Flat-file corpus store written by `ingest` and read by every later step.
//!
//! Layout:
//!
//! ```text
//! <store>/sentences.tsv      SENTENCES.tsv columns, aliases applied
//! <store>/predications.tsv   PREDICATIONS.tsv columns, duplicates collapsed
//! <store>/ingest.json        load reports and input digests
//! ```

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufReader, Read};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::ingest::{
    ingest_predications, ingest_sentences, AliasMap, PredicationSet, SentenceIndex,
    PREDICATION_COLUMNS, SENTENCE_COLUMNS,
};
use crate::error::{Error, Result};
use crate::tsv::{LoadReport, TsvWriter};

pub const SENTENCES_FILE: &str = "sentences.tsv";
pub const PREDICATIONS_FILE: &str = "predications.tsv";
pub const INGEST_FILE: &str = "ingest.json";

/// Hex-encoded SHA-256 of a file's bytes.
pub fn file_digest(path: &Path) -> Result<String> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 64 * 1024];
    loop {
        let n = reader.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

pub fn bytes_digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestSummary {
    /// Input role (`sentences`, `predications`, `aliases`) to file name and digest.
    pub inputs: BTreeMap<String, InputDigest>,
    pub sentences: LoadReport,
    pub predications: LoadReport,
    #[serde(default)]
    pub aliases: Option<LoadReport>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &Path) -> Result<Self> {
        Ok(Self {
            path: path.display().to_string(),
            sha256: file_digest(path)?,
        })
    }
}

/// Ingested corpus held in memory.
#[derive(Debug, Clone)]
pub struct Store {
    pub dir: PathBuf,
    pub sentences: SentenceIndex,
    pub predications: PredicationSet,
    pub summary: IngestSummary,
}

impl Store {
    /// Runs ingestion over raw tables and persists the result under `dir`.
    pub fn ingest(
        sentences_path: &Path,
        predications_path: &Path,
        aliases_path: Option<&Path>,
        dir: &Path,
    ) -> Result<Store> {
        let mut summary = IngestSummary::default();
        let aliases = match aliases_path {
            Some(p) => {
                let (map, report) = AliasMap::load(p)?;
                summary.inputs.insert("aliases".into(), InputDigest::of(p)?);
                summary.aliases = Some(report);
                Some(map)
            }
            None => None,
        };
        let (sentences, s_report) = ingest_sentences(sentences_path, aliases.as_ref())?;
        let (predications, p_report) =
            ingest_predications(predications_path, &sentences, aliases.as_ref())?;
        summary.inputs.insert("sentences".into(), InputDigest::of(sentences_path)?);
        summary
            .inputs
            .insert("predications".into(), InputDigest::of(predications_path)?);
        summary.sentences = s_report;
        summary.predications = p_report;

        let store = Store {
            dir: dir.to_path_buf(),
            sentences,
            predications,
            summary,
        };
        store.save()?;
        Ok(store)
    }

    pub fn save(&self) -> Result<()> {
        std::fs::create_dir_all(&self.dir).map_err(|e| Error::io(&self.dir, e))?;
        write_sentences(&self.dir.join(SENTENCES_FILE), &self.sentences)?;
        write_predications(&self.dir.join(PREDICATIONS_FILE), &self.predications)?;
        let json = serde_json::to_string_pretty(&self.summary)?;
        let path = self.dir.join(INGEST_FILE);
        std::fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))
    }

    pub fn open(dir: &Path) -> Result<Store> {
        let (sentences, _) = ingest_sentences(&dir.join(SENTENCES_FILE), None)?;
        let (predications, _) = ingest_predications(&dir.join(PREDICATIONS_FILE), &sentences, None)?;
        let path = dir.join(INGEST_FILE);
        let summary = match std::fs::read_to_string(&path) {
            Ok(s) => serde_json::from_str(&s)?,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => IngestSummary::default(),
            Err(e) => return Err(Error::io(&path, e)),
        };
        Ok(Store {
            dir: dir.to_path_buf(),
            sentences,
            predications,
            summary,
        })
    }

    /// Digests of the files that make up the store.
    pub fn digests(&self) -> Result<BTreeMap<String, String>> {
        let mut out = BTreeMap::new();
        for name in [SENTENCES_FILE, PREDICATIONS_FILE] {
            out.insert(name.to_string(), file_digest(&self.dir.join(name))?);
        }
        Ok(out)
    }
}

pub fn write_sentences(path: &Path, sentences: &SentenceIndex) -> Result<()> {
    let mut w = TsvWriter::create(path)?;
    w.row(SENTENCE_COLUMNS)?;
    for s in sentences.iter() {
        let year = s.pub_year.to_string();
        w.row([
            s.sentence_id.as_str(),
            s.article_id.as_str(),
            &year,
            s.location.code(),
            s.section_header.as_deref().unwrap_or(""),
            &s.text,
        ])?;
    }
    w.finish()?;
    Ok(())
}

pub fn write_predications(path: &Path, predications: &PredicationSet) -> Result<()> {
    let mut w = TsvWriter::create(path)?;
    w.row(PREDICATION_COLUMNS)?;
    for p in predications {
        w.row([
            p.predication_id.as_str(),
            p.sentence_id.as_str(),
            p.article_id.as_str(),
            &p.predicate,
            &p.subject_cui,
            &p.subject_name,
            &p.subject_semtype,
            &p.object_cui,
            &p.object_name,
            &p.object_semtype,
        ])?;
    }
    w.finish()?;
    Ok(())
}
