//! Instance generation, TSPLIB input, campaigns and reports.

pub mod experiment;
pub mod generate;
pub mod invariants;
pub mod report;
pub mod tsplib;

pub use experiment::{
    run_experiment, Aggregates, Campaign, Counterexample, ExperimentConfig, ExperimentReport, GroupStats,
    InlineInstance, ReportRow, RunOptions, SeedRange,
};
pub use generate::{gen_instance, planted_tour, Distribution, InstanceSpec, SeededRng};
pub use invariants::{check_instance, InvariantReport};
pub use report::{emit_report, parse_json_report, ReportFormat, CSV_COLUMNS};
pub use tsplib::{parse_tsplib, write_tsplib, TsplibInstance};
