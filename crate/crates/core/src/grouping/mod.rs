//! Relation-group and semantic-type-group mappings, the informativeness
//! filter, and type-pair aggregation of uncertainty scores.

mod pairs;
mod relation;
mod semtype;

pub use pairs::{aggregate_type_pairs, triple_profiles, TripleProfile, TypePairScore};
pub use relation::{
    group_relation, informative_filter, is_informative, RelationGroup, RelationMap,
    DEFAULT_RELATION_GROUPS, RELATION_COLUMNS,
};
pub use semtype::{
    group_semtype, Granularity, SemTypeGroups, COARSE_SEMTYPE_GROUPS, FINE_SEMTYPE_GROUPS,
    SEMTYPE_COLUMNS, UNGROUPED,
};
