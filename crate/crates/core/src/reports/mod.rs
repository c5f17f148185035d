//! Report tables and charts, the end-to-end pipeline that produces them,
//! and spot-check verification of an emitted bundle.

pub mod format;
mod pipeline;
mod relations;
pub mod svg;
pub mod tables;
mod verify;

pub use pipeline::{
    match_all, run_report, scored_in_scope, Analysis, FreqSource, Manifest, PipelineConfig, ReportBundle,
    Resources, BUILTIN_TABLE1, CORPUS_FREQ, GROWTH_CSV, GROWTH_SVG, MANIFEST_JSON, PAIRS_CONFLICTING_TSV,
    PAIRS_HEDGING_TSV, RELATIONS_CSV, RELATIONS_SVG, SECTIONS_ALL_CSV, SECTIONS_CSV, SECTIONS_SVG,
};
pub use relations::{relation_distribution, RelationDistribution};
pub use verify::{check_targets, read_targets, verify_reports, CellCheck, Table, Target, TargetFile};

pub const DEFAULT_TARGETS: &str = include_str!("../../data/reference_targets.json");

/// The shipped corpus-level targets.
pub fn builtin_targets() -> TargetFile {
    serde_json::from_str(DEFAULT_TARGETS).expect("shipped targets parse")
}
