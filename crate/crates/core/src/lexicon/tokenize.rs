/// Lower-cased word tokens: maximal runs of letters, digits, hyphens and
/// apostrophes. Everything else separates tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    text.split(|c: char| !is_token_char(c))
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
        .collect()
}

fn is_token_char(c: char) -> bool {
    c.is_alphanumeric() || matches!(c, '-' | '\'' | '\u{2019}')
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn punctuation_separates() {
        assert_eq!(tokenize("No consensus, perhaps?"), vec!["no", "consensus", "perhaps"]);
    }

    #[test]
    fn empty_input() {
        assert!(tokenize("").is_empty());
        assert!(tokenize(" ,.;").is_empty());
    }

    #[test]
    fn hyphens_and_apostrophes_stay_inside_tokens() {
        assert_eq!(
            tokenize("Sjogren's non-conflicting p<0.001"),
            vec!["sjogren's", "non-conflicting", "p", "0", "001"]
        );
    }

    #[test]
    fn example_fragment() {
        let tokens = tokenize("suggesting a possible role of BDNF");
        assert!(tokens.contains(&"possible".to_string()));
        assert!(tokens.contains(&"bdnf".to_string()));
    }
}
