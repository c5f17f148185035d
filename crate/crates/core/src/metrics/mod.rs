//! Entropy weights for cue words, sentence and triple uncertainty, and the
//! uncertainty rate.

mod frequency;
mod score;

pub use frequency::{
    back_solve_total, build_frequency_table, build_frequency_table_parallel, builtin_table1,
    default_total_sentences, entropy_weight, reference_frequency_table, FrequencyCounter,
    FrequencyRow, FrequencyTable, LogBase, DEFAULT_PROPERTIES, FREQUENCY_COLUMNS,
};
pub use score::{
    score_triples, sentence_uncertainty, triple_uncertainty, CategoryScope, ScoredTriple,
    UncertaintyScore,
};
