use crate::corpus::{ArticleId, Location, SentenceId, SentenceRecord};

use super::ArticleRecord;

pub const TITLE_HEADER: &str = "TITLE";

/// Tokens ending in a period that do not end a sentence. Compared
/// case-insensitively against the whitespace-delimited token, except that
/// all-capital tokens such as `DR.` or `NO.` are read as acronyms.
pub const ABBREVIATIONS: &[&str] = &[
    "e.g.", "i.e.", "vs.", "v.", "al.", "etc.", "fig.", "figs.", "approx.", "ca.", "cf.", "dr.",
    "mr.", "mrs.", "ms.", "no.", "nos.", "vol.", "resp.", "ref.", "eq.", "st.", "sp.", "spp.",
    "inc.", "ltd.", "co.", "jr.", "sr.", "prof.", "min.", "max.", "avg.", "est.", "incl.",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitSentence {
    /// 1-based position within the title or across the whole abstract.
    pub position: usize,
    pub record: SentenceRecord,
}

fn is_abbreviation(token: &str) -> bool {
    let t = token.trim_start_matches(['(', '[', '"', '\'']);
    let letters: Vec<char> = t.chars().filter(|c| c.is_alphabetic()).collect();
    if letters.len() > 1 && letters.iter().all(|c| c.is_uppercase()) {
        return false;
    }
    ABBREVIATIONS.iter().any(|a| a.eq_ignore_ascii_case(t))
}

fn opens_sentence(c: char) -> bool {
    c.is_uppercase() || c.is_ascii_digit()
}

/// Splits at `.`, `?` or `!` (plus any closing quotes or brackets) followed
/// by whitespace and then an uppercase letter or digit, unless the token
/// ending there is a known abbreviation. Returned pieces are trimmed.
pub fn split_text(text: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut start = 0;
    let mut i = 0;
    while i < chars.len() {
        let (_, c) = chars[i];
        if !matches!(c, '.' | '?' | '!') {
            i += 1;
            continue;
        }
        let mut j = i + 1;
        while j < chars.len() && matches!(chars[j].1, '.' | '?' | '!' | ')' | ']' | '"' | '\'' | '’' | '”') {
            j += 1;
        }
        let end = chars.get(j).map_or(text.len(), |(b, _)| *b);
        let mut k = j;
        while k < chars.len() && chars[k].1.is_whitespace() {
            k += 1;
        }
        let mut first = k;
        while first < chars.len() && matches!(chars[first].1, '(' | '[' | '"' | '\'' | '“' | '‘') {
            first += 1;
        }
        let boundary = k > j && first < chars.len() && opens_sentence(chars[first].1);
        if boundary {
            let token_start = text[start..end]
                .rfind(char::is_whitespace)
                .map_or(start, |p| start + p + 1);
            if c != '.' || !is_abbreviation(&text[token_start..end]) {
                let piece = text[start..end].trim();
                if !piece.is_empty() {
                    out.push(piece);
                }
                start = chars[k].0;
            }
        }
        i = j.max(i + 1);
    }
    let tail = text[start..].trim();
    if !tail.is_empty() {
        out.push(tail);
    }
    out
}

/// Title sentences get the header `TITLE`; abstract sentences carry their
/// section header. IDs are `{pmid}.ti.{n}` and `{pmid}.ab.{n}`.
pub fn split_sentences(article: &ArticleRecord) -> Vec<SplitSentence> {
    let make = |location: Location, position: usize, header: &str, text: &str| SplitSentence {
        position,
        record: SentenceRecord {
            sentence_id: SentenceId::new(format!("{}.{}.{position}", article.article_id, location.code())),
            article_id: ArticleId::new(article.article_id.as_str()),
            pub_year: article.pub_year,
            location,
            section_header: (!header.trim().is_empty()).then(|| header.trim().to_string()),
            text: text.to_string(),
        },
    };
    let mut out: Vec<SplitSentence> = split_text(&article.title)
        .into_iter()
        .enumerate()
        .map(|(i, s)| make(Location::Title, i + 1, TITLE_HEADER, s))
        .collect();
    let mut position = 0;
    for (header, body) in &article.abstract_sections {
        for s in split_text(body) {
            position += 1;
            out.push(make(Location::Abstract, position, header, s));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn article(title: &str, sections: &[(&str, &str)]) -> ArticleRecord {
        ArticleRecord {
            article_id: "7".into(),
            title: title.into(),
            abstract_sections: sections.iter().map(|(h, b)| (h.to_string(), b.to_string())).collect(),
            pub_year: 2012,
            language: "eng".into(),
        }
    }

    fn normalized(s: &str) -> String {
        s.split_whitespace().collect::<Vec<_>>().join(" ")
    }

    #[test]
    fn two_sentence_section() {
        let out = split_sentences(&article("", &[("CONCLUSIONS", "A. B.")]));
        assert_eq!(out.len(), 2);
        assert!(out.iter().all(|s| s.record.section_header.as_deref() == Some("CONCLUSIONS")));
        assert_eq!(out.iter().map(|s| s.position).collect::<Vec<_>>(), [1, 2]);
    }

    #[test]
    fn title_only() {
        let out = split_sentences(&article("Adiponectin prevents injury", &[]));
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].record.section_header.as_deref(), Some(TITLE_HEADER));
        assert_eq!(out[0].record.sentence_id.as_str(), "7.ti.1");
    }

    #[test]
    fn empty_article_is_empty() {
        assert!(split_sentences(&article("", &[("RESULTS", "  ")])).is_empty());
    }

    // Hand count: each line of the fixture below is one sentence.
    const FIXTURE: [&str; 10] = [
        "Hypertension, e.g. essential hypertension, is common in adults.",
        "We compared ACE inhibitors vs. placebo in 120 patients.",
        "Smith et al. reported similar effects in 2009.",
        "Was the effect dose dependent?",
        "Yes!",
        "Outcomes (see Fig. 2) improved over 12 months, i.e. Markedly so.",
        "3 patients withdrew.",
        "Serum levels were approx. 40 mg per litre.",
        "\"Adverse events were rare.\"",
        "Cardiac markers, lipids, etc. Were measured at baseline.",
    ];

    #[test]
    fn abbreviation_fixture_matches_hand_count() {
        let body = FIXTURE.join(" ");
        let got = split_text(&body);
        assert_eq!(got, FIXTURE);
    }

    #[test]
    fn capitalised_acronyms_can_end_sentences() {
        assert_eq!(split_text("A marker for DR. A possible role."), ["A marker for DR.", "A possible role."]);
        assert_eq!(split_text("Seen by Dr. Smith."), ["Seen by Dr. Smith."]);
    }

    #[test]
    fn positions_run_across_sections() {
        let out = split_sentences(&article("T.", &[("BACKGROUND", "A. B."), ("RESULTS", "C.")]));
        let ids: Vec<&str> = out.iter().map(|s| s.record.sentence_id.as_str()).collect();
        assert_eq!(ids, ["7.ti.1", "7.ab.1", "7.ab.2", "7.ab.3"]);
    }

    proptest! {
        #[test]
        fn splitting_is_loss_free(body in "[A-Za-z0-9 .?!,()\n]{0,200}") {
            let joined = split_text(&body).join(" ");
            prop_assert_eq!(normalized(&joined), normalized(&body));
        }

        #[test]
        fn splitting_is_deterministic(body in "[A-Za-z .]{0,120}") {
            prop_assert_eq!(split_text(&body), split_text(&body));
        }
    }
}
