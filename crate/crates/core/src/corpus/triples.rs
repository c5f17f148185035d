use std::collections::{BTreeMap, BTreeSet};

use super::model::{PredicationId, PredicationRecord, SentenceId, TripleKey};

/// Groups predication instances by triple identity.
pub fn unique_triples<'a, I>(predications: I) -> BTreeMap<TripleKey, Vec<PredicationId>>
where
    I: IntoIterator<Item = &'a PredicationRecord>,
{
    let mut map: BTreeMap<TripleKey, Vec<PredicationId>> = BTreeMap::new();
    for p in predications {
        map.entry(p.key()).or_default().push(p.predication_id.clone());
    }
    map
}

/// Distinct supporting sentences per triple, sorted by id so the result
/// does not depend on predication order.
///
/// A sentence that yields the same triple twice (for instance with two
/// different semantic-type readings of a concept) supports it once.
pub fn triple_support<'a, I>(predications: I) -> BTreeMap<TripleKey, Vec<SentenceId>>
where
    I: IntoIterator<Item = &'a PredicationRecord>,
{
    let mut map: BTreeMap<TripleKey, BTreeSet<SentenceId>> = BTreeMap::new();
    for p in predications {
        map.entry(p.key()).or_default().insert(p.sentence_id.clone());
    }
    map.into_iter().map(|(k, s)| (k, s.into_iter().collect())).collect()
}
