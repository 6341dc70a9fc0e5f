//! Output-versus-input metrics, the repeated-run experiment harness, the
//! normalization-rule study and the distance-vector de-anonymization attack.

mod attack;
mod experiment;
mod metrics;
mod normalization;

pub use attack::{dv_attack, dv_attack_with_seeds, random_guess_rate, AttackConfig};
pub use experiment::{
    aggregate, run_experiment, write_experiment_csv, Dataset, ExperimentOutput, ExperimentRow, MetricSummary,
    RunRecord, Strategy, Z_99,
};
pub use metrics::{compare, compare_with_summary, pearson, InputSummary, MetricsReport};
pub use normalization::{normalization_study, write_normalization_csv, NormalizationRow, StudyGraph};
