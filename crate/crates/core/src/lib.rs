//! Uncertainty metrics over biomedical subject-predicate-object triples
//! extracted from literature.

mod error;

pub mod acquisition;
pub mod corpus;
pub mod grouping;
pub mod lexicon;
pub mod metrics;
pub mod reports;
pub mod rhetoric;
pub mod tsv;

pub use error::{Error, Result};
