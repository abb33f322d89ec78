//! Staged enumeration of adjunctive basic-class candidates.

mod config;
mod pipeline;
mod solver;

pub use config::{audit, Audit, CheckOutcome, CheckStatus, ConfigError, SearchConfig, CHECK_NAMES};
pub use pipeline::{
    adjunctive_range, check_minimality, finish_report, run_pipeline, run_pipeline_with,
    solve_candidate, tally_indices, verify_lemma_hypothesis, Arithmetic, CandidateSpace,
    PipelineOptions, SearchError, StageCounts, StageReport, StageTally,
};
pub use solver::{CandidateSolver, NarrowSolver};
