use rayon::prelude::*;
use serde::Serialize;

use crate::random::derive_seed;
use crate::tolerances::Tolerances;
use crate::tracker::TrackOptions;

use super::instances::{random_general_hypersurface, random_inner_center, random_outer_center};
use super::report::monodromy_report;
use super::ClassifierError;

pub const MAX_SWEEP_N: usize = 2;
pub const MAX_SWEEP_D: u32 = 6;
pub const MAX_SWEEP_TRIALS: usize = 100;

const TAG_SURFACE: u64 = 0x51;
const TAG_OUTER: u64 = 0x52;
const TAG_INNER: u64 = 0x53;
const TAG_RUN: u64 = 0x54;

/// Outcome for one center of one trial.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CenterOutcome {
    pub uniform: bool,
    pub order: Option<String>,
    pub verdict: String,
    pub transitive: bool,
    /// Group generated by 2-cycles, when every branch point was simple.
    pub transpositions: Option<bool>,
    pub attempts: usize,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub trial: usize,
    pub seed: u64,
    pub outer: CenterOutcome,
    pub inner: CenterOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepFailure {
    pub trial: usize,
    pub seed: u64,
    pub center: &'static str,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSummary {
    pub n: usize,
    pub d: u32,
    pub trials: usize,
    pub seed: u64,
    pub outer_uniform: usize,
    pub inner_uniform: usize,
    pub rows: Vec<SweepRow>,
    pub failures: Vec<SweepFailure>,
}

impl SweepSummary {
    pub fn all_uniform(&self) -> bool {
        self.outer_uniform == self.trials && self.inner_uniform == self.trials
    }
}

pub fn validate_sweep(n: usize, d: u32, trials: usize) -> Result<(), ClassifierError> {
    if d < 2 {
        return Err(ClassifierError::Input(format!("degree must exceed 1, got {d}")));
    }
    if !(1..=MAX_SWEEP_N).contains(&n) || d > MAX_SWEEP_D || trials == 0 || trials > MAX_SWEEP_TRIALS {
        return Err(ClassifierError::Input(format!(
            "sweep bounds are 1 <= n <= {MAX_SWEEP_N}, 2 <= d <= {MAX_SWEEP_D}, 1 <= trials <= {MAX_SWEEP_TRIALS}; got n = {n}, d = {d}, trials = {trials}"
        )));
    }
    Ok(())
}

fn outcome(result: Result<super::MonodromyReport, ClassifierError>) -> CenterOutcome {
    match result {
        Ok(r) => CenterOutcome {
            uniform: r.uniform,
            order: Some(r.group_summary.order.clone()),
            verdict: r.verdict_line(),
            transitive: r.group_summary.transitive,
            transpositions: r
                .diagnostics
                .genericity
                .simple_flags
                .iter()
                .all(|&f| f)
                .then_some(r.diagnostics.all_petals_transpositions),
            attempts: r.diagnostics.attempts.len(),
            error: None,
        },
        Err(e) => CenterOutcome {
            uniform: false,
            order: None,
            verdict: "no verdict".into(),
            transitive: false,
            transpositions: None,
            attempts: match &e {
                ClassifierError::NoVerdict { attempts } => attempts.len(),
                _ => 0,
            },
            error: Some(e.to_string()),
        },
    }
}

fn run_trial(n: usize, d: u32, trial: usize, trial_seed: u64, tol: &Tolerances, opts: &TrackOptions) -> SweepRow {
    let surface = random_general_hypersurface(n, d, derive_seed(trial_seed, TAG_SURFACE, 0));
    let run_seed = derive_seed(trial_seed, TAG_RUN, 0);
    let (outer, inner) = match surface {
        Err(e) => (outcome(Err(e.clone())), outcome(Err(e))),
        Ok(f) => {
            let p_out = random_outer_center(&f, derive_seed(trial_seed, TAG_OUTER, 0), tol);
            let outer = outcome(monodromy_report(&f, &p_out, run_seed, tol, opts));
            let inner = outcome(
                random_inner_center(&f, derive_seed(trial_seed, TAG_INNER, 0))
                    .and_then(|p| monodromy_report(&f, &p, run_seed, tol, opts)),
            );
            (outer, inner)
        }
    };
    SweepRow {
        trial,
        seed: trial_seed,
        outer,
        inner,
    }
}

/// Classifies one random outer and one random inner center on each of `trials`
/// random hypersurfaces. Trial `k` uses seed `seed + k`; trials run in parallel
/// and are reported in index order.
pub fn uniform_sweep(
    n: usize,
    d: u32,
    trials: usize,
    seed: u64,
    tol: &Tolerances,
    opts: &TrackOptions,
) -> Result<SweepSummary, ClassifierError> {
    validate_sweep(n, d, trials)?;
    let rows: Vec<SweepRow> = (0..trials)
        .into_par_iter()
        .map(|k| run_trial(n, d, k, seed.wrapping_add(k as u64), tol, opts))
        .collect();
    let mut failures = Vec::new();
    for row in &rows {
        for (name, o) in [("outer", &row.outer), ("inner", &row.inner)] {
            if !o.uniform {
                failures.push(SweepFailure {
                    trial: row.trial,
                    seed: row.seed,
                    center: name,
                    message: o.error.clone().unwrap_or_else(|| o.verdict.clone()),
                });
            }
        }
    }
    Ok(SweepSummary {
        n,
        d,
        trials,
        seed,
        outer_uniform: rows.iter().filter(|r| r.outer.uniform).count(),
        inner_uniform: rows.iter().filter(|r| r.inner.uniform).count(),
        rows,
        failures,
    })
}
