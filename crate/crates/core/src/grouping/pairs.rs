//! Aggregation of triple scores to (subject group, object group) pairs,
//! ignoring the predicate.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use super::semtype::SemTypeGroups;
use crate::corpus::{PredicationRecord, TripleKey};
use crate::metrics::{ScoredTriple, UncertaintyScore};

/// Semantic types and a display string chosen for one triple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleProfile {
    pub subject_semtype: String,
    pub object_semtype: String,
    pub display: String,
}

/// A concept can carry several semantic types across predications; each
/// triple takes its most frequent (subject, object) type combination, ties
/// going to the lexicographically smallest.
pub fn triple_profiles<'a, I>(predications: I) -> BTreeMap<TripleKey, TripleProfile>
where
    I: IntoIterator<Item = &'a PredicationRecord>,
{
    // per triple: (subject type, object type) -> (count, first display string)
    type TypeCounts = BTreeMap<(String, String), (usize, String)>;
    let mut counts: BTreeMap<TripleKey, TypeCounts> = BTreeMap::new();
    for p in predications {
        let entry = counts
            .entry(p.key())
            .or_default()
            .entry((p.subject_semtype.clone(), p.object_semtype.clone()))
            .or_insert_with(|| (0, p.display_triple()));
        entry.0 += 1;
    }
    counts
        .into_iter()
        .map(|(key, types)| {
            let ((s, o), (_, display)) = types
                .into_iter()
                .fold(None, |best: Option<((String, String), (usize, String))>, item| match best {
                    Some(b) if b.1 .0 >= item.1 .0 => Some(b),
                    _ => Some(item),
                })
                .expect("every key has at least one predication");
            (
                key,
                TripleProfile {
                    subject_semtype: s,
                    object_semtype: o,
                    display,
                },
            )
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TypePairScore {
    pub subject_group: String,
    pub object_group: String,
    pub score: UncertaintyScore,
    pub member_triples: usize,
    pub example_triple: TripleKey,
    pub example_display: String,
}

fn by_score_desc(a: &UncertaintyScore, b: &UncertaintyScore) -> Ordering {
    b.ie.total_cmp(&a.ie).then(b.rate.total_cmp(&a.rate))
}

/// Ranks type pairs by summed IE (then pooled rate, subject, object).
///
/// Pair IE is the sum of member-triple IE; the pair rate pools uncertain and
/// total sentence counts over members. Members are summed in key order so the
/// result does not depend on input order. The example is the member with the
/// highest score.
pub fn aggregate_type_pairs(
    scored: &[ScoredTriple],
    profiles: &BTreeMap<TripleKey, TripleProfile>,
    groups: &SemTypeGroups,
) -> Vec<TypePairScore> {
    let mut members: HashMap<(String, String), Vec<&ScoredTriple>> = HashMap::new();
    for t in scored {
        let (s, o) = match profiles.get(&t.key) {
            Some(p) => (groups.group(&p.subject_semtype), groups.group(&p.object_semtype)),
            None => (groups.group(""), groups.group("")),
        };
        members.entry((s.to_string(), o.to_string())).or_default().push(t);
    }

    let mut out: Vec<TypePairScore> = members
        .into_iter()
        .map(|((subject_group, object_group), mut triples)| {
            triples.sort_by(|a, b| a.key.cmp(&b.key));
            let score = triples
                .iter()
                .fold(UncertaintyScore::new(0.0, 0, 0), |acc, t| acc.pooled(&t.score));
            let example = triples
                .iter()
                .min_by(|a, b| by_score_desc(&a.score, &b.score).then(a.key.cmp(&b.key)))
                .expect("pair has members");
            let example_display = profiles
                .get(&example.key)
                .map(|p| p.display.clone())
                .unwrap_or_else(|| example.key.to_string());
            TypePairScore {
                subject_group,
                object_group,
                score,
                member_triples: triples.len(),
                example_triple: example.key.clone(),
                example_display,
            }
        })
        .collect();

    out.sort_by(|a, b| {
        by_score_desc(&a.score, &b.score)
            .then_with(|| a.subject_group.cmp(&b.subject_group))
            .then_with(|| a.object_group.cmp(&b.object_group))
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{ArticleId, PredicationId, SentenceId};
    use crate::grouping::Granularity;

    fn pred(id: &str, s: &str, st: &str, o: &str, ot: &str) -> PredicationRecord {
        PredicationRecord {
            predication_id: PredicationId::new(id),
            sentence_id: SentenceId::new(format!("s{id}")),
            article_id: ArticleId::new("A"),
            subject_cui: s.into(),
            subject_name: format!("{s}-name"),
            subject_semtype: st.into(),
            predicate: "PREDISPOSES".into(),
            object_cui: o.into(),
            object_name: format!("{o}-name"),
            object_semtype: ot.into(),
        }
    }

    fn scored(s: &str, o: &str, ie: f64, u: u64, n: u64) -> ScoredTriple {
        ScoredTriple {
            key: TripleKey::new(s, "PREDISPOSES", o),
            score: UncertaintyScore::new(ie, u, n),
        }
    }

    #[test]
    fn two_triples_pool_into_one_pair() {
        let preds = [pred("1", "C1", "aapp", "C2", "dsyn"), pred("2", "C3", "aapp", "C4", "dsyn")];
        let profiles = triple_profiles(&preds);
        let scores = [scored("C1", "C2", 0.017, 1, 2), scored("C3", "C4", 0.025, 1, 1)];
        let pairs = aggregate_type_pairs(&scores, &profiles, &SemTypeGroups::builtin(Granularity::Fine));
        assert_eq!(pairs.len(), 1);
        let p = &pairs[0];
        assert_eq!(p.subject_group, "Amino Acid, Peptide, or Protein");
        assert_eq!(p.object_group, "Disease or Syndrome");
        assert!((p.score.ie - 0.042).abs() < 1e-12);
        assert_eq!((p.score.uncertain_sentence_count, p.score.total_sentence_count), (2, 3));
        assert_eq!(p.member_triples, 2);
        assert_eq!(p.example_triple, TripleKey::new("C3", "PREDISPOSES", "C4"));
        assert_eq!(p.example_display, "C3-name_PREDISPOSES_C4-name");
    }

    #[test]
    fn empty_input_gives_empty_ranking() {
        let groups = SemTypeGroups::builtin(Granularity::Fine);
        assert!(aggregate_type_pairs(&[], &BTreeMap::new(), &groups).is_empty());
    }

    #[test]
    fn ranking_breaks_ties_by_rate_then_names() {
        let preds = [
            pred("1", "A", "dsyn", "B", "dsyn"),
            pred("2", "C", "aapp", "D", "dsyn"),
            pred("3", "E", "gngm", "F", "dsyn"),
        ];
        let profiles = triple_profiles(&preds);
        let scores = [
            scored("A", "B", 0.5, 1, 4),
            scored("C", "D", 0.5, 1, 2),
            scored("E", "F", 0.5, 1, 2),
        ];
        let pairs = aggregate_type_pairs(&scores, &profiles, &SemTypeGroups::builtin(Granularity::Fine));
        let order: Vec<&str> = pairs.iter().map(|p| p.subject_group.as_str()).collect();
        assert_eq!(order, ["Amino Acid, Peptide, or Protein", "Gene or Genome", "Disease or Syndrome"]);
    }

    #[test]
    fn profile_prefers_most_frequent_types() {
        let preds = [
            pred("1", "C1", "phsu", "C2", "dsyn"),
            pred("2", "C1", "orch", "C2", "dsyn"),
            pred("3", "C1", "orch", "C2", "dsyn"),
        ];
        let profiles = triple_profiles(&preds);
        assert_eq!(profiles.values().next().unwrap().subject_semtype, "orch");
        let tie = [pred("1", "C1", "phsu", "C2", "dsyn"), pred("2", "C1", "orch", "C2", "dsyn")];
        assert_eq!(triple_profiles(&tie).values().next().unwrap().subject_semtype, "orch");
    }
}
