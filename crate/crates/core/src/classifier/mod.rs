//! End-to-end pipeline: uniform verdicts, random general instances, sweeps, and
//! the degeneration containment experiment.

mod decomposability;
mod degeneration;
pub(crate) mod instances;
mod report;
mod sweep;

use thiserror::Error;

use crate::fibration::FibrationError;
use crate::permgroup::GroupError;

pub use decomposability::{decomposability_of_group, decomposability_report, DecomposabilityCertificate, Tower};
pub use degeneration::{
    default_s_values, degeneration_experiment, point_on_hyperplane, random_degeneration_input, ContainmentRow,
    DegenerationExperiment, DegenerationInput,
};
pub use instances::{random_general_hypersurface, random_inner_center, random_outer_center, smoothness_spot_check};
pub use report::{
    monodromy_report, AttemptRecord, Diagnostics, GroupSummary, InstanceSummary, MonodromyReport, SeedRecord,
    MAX_ATTEMPTS,
};
pub use sweep::{uniform_sweep, validate_sweep, CenterOutcome, SweepFailure, SweepRow, SweepSummary};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClassifierError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Fibration(#[from] FibrationError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("degenerate: {0}")]
    Degenerate(String),
    #[error("no verdict after {} attempts: {}", .attempts.len(), .attempts.last().map(|a| a.outcome.as_str()).unwrap_or(""))]
    NoVerdict { attempts: Vec<AttemptRecord> },
    #[error("unsupported: {0}")]
    Unsupported(String),
}
