use std::borrow::Borrow;
use std::fmt;

use serde::{Deserialize, Serialize};

macro_rules! string_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        #[serde(transparent)]
        pub struct $name(String);

        impl $name {
            pub fn new(id: impl Into<String>) -> Self {
                Self(id.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                Self(s.to_string())
            }
        }

        impl From<String> for $name {
            fn from(s: String) -> Self {
                Self(s)
            }
        }

        impl AsRef<str> for $name {
            fn as_ref(&self) -> &str {
                &self.0
            }
        }

        impl Borrow<str> for $name {
            fn borrow(&self) -> &str {
                &self.0
            }
        }
    };
}

string_id!(
    /// Corpus-wide sentence identifier.
    SentenceId
);
string_id!(
    /// Article identifier (a PMID in MEDLINE-derived corpora).
    ArticleId
);
string_id!(PredicationId);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Location {
    Title,
    Abstract,
}

impl Location {
    pub fn code(self) -> &'static str {
        match self {
            Location::Title => "ti",
            Location::Abstract => "ab",
        }
    }

    pub fn from_code(code: &str) -> Option<Self> {
        match code.trim().to_ascii_lowercase().as_str() {
            "ti" | "title" => Some(Location::Title),
            "ab" | "abstract" => Some(Location::Abstract),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SentenceRecord {
    pub sentence_id: SentenceId,
    pub article_id: ArticleId,
    pub pub_year: i32,
    pub location: Location,
    pub section_header: Option<String>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredicationRecord {
    pub predication_id: PredicationId,
    pub sentence_id: SentenceId,
    pub article_id: ArticleId,
    pub subject_cui: String,
    pub subject_name: String,
    pub subject_semtype: String,
    pub predicate: String,
    pub object_cui: String,
    pub object_name: String,
    pub object_semtype: String,
}

impl PredicationRecord {
    pub fn key(&self) -> TripleKey {
        TripleKey {
            subject_cui: self.subject_cui.clone(),
            predicate: self.predicate.clone(),
            object_cui: self.object_cui.clone(),
        }
    }

    /// Everything except the predication id. Two rows on the same sentence
    /// with equal content are the same extraction.
    pub(crate) fn content(&self) -> [&str; 9] {
        [
            self.sentence_id.as_str(),
            self.article_id.as_str(),
            &self.subject_cui,
            &self.subject_name,
            &self.subject_semtype,
            &self.predicate,
            &self.object_cui,
            &self.object_name,
            &self.object_semtype,
        ]
    }

    /// Human-readable form used in report tables, e.g.
    /// `Adiponectin_PREVENTS_Myocardial Reperfusion Injury`.
    pub fn display_triple(&self) -> String {
        format!("{}_{}_{}", self.subject_name, self.predicate, self.object_name)
    }
}

/// Identity of a knowledge unit. The predicate keeps any `NEG_` prefix.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TripleKey {
    pub subject_cui: String,
    pub predicate: String,
    pub object_cui: String,
}

impl TripleKey {
    pub fn new(
        subject_cui: impl Into<String>,
        predicate: impl Into<String>,
        object_cui: impl Into<String>,
    ) -> Self {
        Self {
            subject_cui: subject_cui.into(),
            predicate: predicate.into(),
            object_cui: object_cui.into(),
        }
    }
}

impl fmt::Display for TripleKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}_{}", self.subject_cui, self.predicate, self.object_cui)
    }
}

/// `(NEG_)?[A-Z_]+`
pub fn is_valid_predicate(predicate: &str) -> bool {
    !predicate.is_empty()
        && !predicate.trim_start_matches("NEG_").is_empty()
        && predicate.bytes().all(|b| b.is_ascii_uppercase() || b == b'_')
}

/// Strips a leading `NEG_` so negated relations group with their positive form.
pub fn strip_negation(predicate: &str) -> &str {
    predicate.strip_prefix("NEG_").unwrap_or(predicate)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn predicate_pattern() {
        assert!(is_valid_predicate("TREATS"));
        assert!(is_valid_predicate("NEG_PREDISPOSES"));
        assert!(is_valid_predicate("HIGHER_THAN"));
        assert!(!is_valid_predicate("treats"));
        assert!(!is_valid_predicate(""));
        assert!(!is_valid_predicate("NEG_"));
        assert!(!is_valid_predicate("CO-OCCURS"));
    }

    #[test]
    fn negation_is_part_of_identity() {
        let pos = TripleKey::new("C1", "PREDISPOSES", "C2");
        let neg = TripleKey::new("C1", "NEG_PREDISPOSES", "C2");
        assert_ne!(pos, neg);
        assert_eq!(strip_negation(&neg.predicate), pos.predicate);
    }
}
