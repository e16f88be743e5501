//! Checkers and reports built on the engine, solver and transforms.

pub mod ablation;
pub mod audit;
pub mod corpus;
pub mod distributivity;
pub mod scan;
pub mod suite;

pub use ablation::{ablated_game, disjoint_positive_pair, maximality_ablation, AblationReport, ForcingCut};
pub use corpus::{generate_corpus, CorpusEntry, CorpusInstance, DEFAULT_SEED, DEFAULT_SIZE, FAMILIES};
pub use distributivity::{
    branch_through, carrier_game, check_distributivity, check_distributivity_with, positive_starts, precipitous_analog,
    Distributivity, DistributivityVariant,
};
pub use scan::{threshold_scan, ScanCell, ScanRow, ThresholdTable};
pub use audit::{cover_number, equivalence_audit, AuditReport, AuditRow, Provenance, Verdict, REPORT_SCHEMA_VERSION};
