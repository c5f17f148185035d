//! Sentence and predication data model, TSV ingestion, triple identity and
//! first-occurrence statistics.

mod ingest;
mod model;
mod stats;
mod store;
mod triples;

pub use ingest::{
    ingest_predications, ingest_predications_from_reader, ingest_sentences,
    ingest_sentences_from_reader, AliasMap, PredicationSet, SentenceIndex, ALIAS_COLUMNS,
    PREDICATION_COLUMNS, SENTENCE_COLUMNS,
};
pub use model::{
    is_valid_predicate, strip_negation, ArticleId, Location, PredicationId, PredicationRecord,
    SentenceId, SentenceRecord, TripleKey,
};
pub use stats::{compute_corpus_stats, CorpusStats, StatsTally, YearStats};
pub use store::{
    bytes_digest, file_digest, write_predications, write_sentences, IngestSummary, InputDigest,
    Store, INGEST_FILE, PREDICATIONS_FILE, SENTENCES_FILE,
};
pub use triples::{triple_support, unique_triples};
