use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::tokenize::tokenize;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CueCategory {
    Hedging,
    Conflicting,
}

impl CueCategory {
    pub const ALL: [CueCategory; 2] = [CueCategory::Hedging, CueCategory::Conflicting];

    pub fn as_str(self) -> &'static str {
        match self {
            CueCategory::Hedging => "hedging",
            CueCategory::Conflicting => "conflicting",
        }
    }
}

impl fmt::Display for CueCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CueCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "hedging" => Ok(CueCategory::Hedging),
            "conflicting" => Ok(CueCategory::Conflicting),
            other => Err(Error::Invalid(format!("unknown cue category `{other}`"))),
        }
    }
}

/// One spelling of a cue: consecutive words, the last of which may be a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Alternative {
    words: Vec<String>,
    prefix_last: bool,
}

impl Alternative {
    fn matches(&self, tokens: &[String]) -> bool {
        let n = self.words.len();
        if n == 0 || tokens.len() < n {
            return false;
        }
        tokens.windows(n).any(|window| {
            let (last_word, head_words) = self.words.split_last().expect("non-empty");
            let (last_tok, head_toks) = window.split_last().expect("non-empty");
            head_words == head_toks
                && if self.prefix_last {
                    last_tok.starts_with(last_word.as_str())
                } else {
                    last_tok == last_word
                }
        })
    }
}

/// A lexicon pattern such as `possibl*`, `no consensus` or `may/maybe`.
///
/// `/` separates alternative spellings, `*` (final character only) turns the
/// last word into a prefix. Matching is token based, so `possibl*` matches
/// `possibly` but not `impossible`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CuePattern {
    text: String,
    alternatives: Vec<Alternative>,
}

impl CuePattern {
    pub fn parse(raw: &str) -> Result<Self> {
        let text = raw.trim().to_lowercase();
        let invalid = |reason: &str| Error::InvalidPattern {
            pattern: raw.to_string(),
            reason: reason.to_string(),
        };
        if text.is_empty() {
            return Err(invalid("empty pattern"));
        }
        let wildcard = text.ends_with('*');
        let body = text.strip_suffix('*').unwrap_or(&text);
        if body.contains('*') {
            return Err(invalid("`*` may only appear as the final character"));
        }
        let parts: Vec<&str> = body.split('/').collect();
        let last = parts.len() - 1;
        let mut alternatives = Vec::with_capacity(parts.len());
        for (i, part) in parts.into_iter().enumerate() {
            let words = tokenize(part);
            if words.is_empty() {
                return Err(invalid("alternative without words"));
            }
            alternatives.push(Alternative {
                words,
                prefix_last: wildcard && i == last,
            });
        }
        Ok(Self { text, alternatives })
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn is_wildcard(&self) -> bool {
        self.text.ends_with('*')
    }

    /// Tests the pattern against an already tokenized sentence.
    pub fn matches(&self, tokens: &[String]) -> bool {
        self.alternatives.iter().any(|a| a.matches(tokens))
    }
}

impl fmt::Display for CuePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(pattern: &str, text: &str) -> bool {
        CuePattern::parse(pattern).unwrap().matches(&tokenize(text))
    }

    #[test]
    fn exact_words() {
        assert!(m("potential", "a potential risk"));
        assert!(!m("potential", "potentially harmful"));
        assert!(m("Unknown", "previously UNKNOWN role"));
    }

    #[test]
    fn wildcard_is_a_token_prefix() {
        assert!(m("possibl*", "This is possibly significant"));
        assert!(m("possibl*", "possible"));
        assert!(!m("possibl*", "The results were impossible to ignore"));
        assert!(m("controvers*", "but this remains controversial."));
    }

    #[test]
    fn multi_word_needs_adjacency() {
        assert!(m("no consensus", "There is no consensus yet"));
        assert!(m("no consensus", "No, consensus!"));
        assert!(!m("no consensus", "no clear consensus"));
        assert!(!m("no consensus", "consensus no"));
    }

    #[test]
    fn slash_alternation() {
        assert!(m("may/maybe", "it may help"));
        assert!(m("may/maybe", "maybe not"));
        assert!(!m("may/maybe", "mayhem ensued"));
    }

    #[test]
    fn bad_patterns() {
        assert!(CuePattern::parse("").is_err());
        assert!(CuePattern::parse("  ").is_err());
        assert!(CuePattern::parse("po*ssible").is_err());
        assert!(CuePattern::parse("**").is_err());
        assert!(CuePattern::parse("a//b").is_err());
    }
}
