use num_complex::Complex64;
use serde::Serialize;

use crate::fibration::{
    branch_points, build_projection, genericity_report, plan_loops, slice_to_family, CenterKind, FibrationError,
    GenericityReport, ProjectionInstance,
};
use crate::permgroup::{lemma1_check, GroupLabel, PermGroup, Permutation};
use crate::poly::{format_complex, ComplexPoint, HomogeneousPoly};
use crate::random::derive_seed;
use crate::tolerances::Tolerances;
use crate::tracker::{monodromy_generators, TrackOptions, TrackStats};

use super::ClassifierError;

pub const MAX_ATTEMPTS: u64 = 5;
/// Kernel self-tests run on groups up to this degree.
const SELF_TEST_DEGREE: usize = 7;

const TAG_ATTEMPT: u64 = 0xa7;
const TAG_FRAME: u64 = 1;
const TAG_LINE: u64 = 2;
const TAG_LOOPS: u64 = 3;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceSummary {
    pub degree: usize,
    /// Dimension n of the hypersurface in P^{n+1}.
    pub dimension: usize,
    pub center: Vec<String>,
    pub center_kind: CenterKind,
    pub center_value: f64,
    pub effective_degree: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupSummary {
    pub degree: usize,
    /// Exact order as a decimal string.
    pub order: String,
    pub generators: Vec<String>,
    pub labels: Vec<GroupLabel>,
    pub transitive: bool,
    pub transitivity_degree: usize,
    pub block_sizes: Vec<usize>,
}

impl GroupSummary {
    pub fn of(g: &PermGroup) -> Self {
        let mut block_sizes: Vec<usize> = g.pair_block_systems().iter().map(|s| s[0].len()).collect();
        block_sizes.dedup();
        GroupSummary {
            degree: g.degree(),
            order: g.order().to_string(),
            generators: g.generators().iter().map(|p| p.to_string()).collect(),
            labels: g.classify(),
            transitive: g.is_transitive(),
            transitivity_degree: if g.is_transitive() { g.transitivity_degree() } else { 0 },
            block_sizes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttemptRecord {
    pub attempt: u64,
    pub seed: u64,
    pub outcome: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeedRecord {
    pub seed: u64,
    pub attempt_seed: u64,
    pub frame_seed: u64,
    pub line_seed: u64,
    pub loop_seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub genericity: GenericityReport,
    pub branch_count: usize,
    pub discriminant_degree: usize,
    pub branch_points: Vec<[f64; 2]>,
    pub basepoint: [f64; 2],
    pub petal_cycle_types: Vec<Vec<usize>>,
    pub infinity_permutation: String,
    pub relation_holds: bool,
    pub all_petals_transpositions: bool,
    /// Lemma-1 agreement on the group, when its degree allows the check.
    pub kernel_self_test: Option<bool>,
    pub tracking: TrackStats,
    pub attempts: Vec<AttemptRecord>,
}

/// Everything computed for one (hypersurface, center) pair.
#[derive(Debug, Clone, Serialize)]
pub struct MonodromyReport {
    pub instance: InstanceSummary,
    #[serde(skip)]
    pub group: PermGroup,
    #[serde(rename = "group")]
    pub group_summary: GroupSummary,
    pub uniform: bool,
    pub diagnostics: Diagnostics,
    pub seeds: SeedRecord,
    pub tolerances: Tolerances,
}

impl MonodromyReport {
    pub fn labels(&self) -> &[GroupLabel] {
        &self.group_summary.labels
    }

    /// One-line verdict such as `S3, UNIFORM` or `cyclic order 4, NON-UNIFORM`.
    pub fn verdict_line(&self) -> String {
        let d = self.group.degree();
        let name = if self.group.is_symmetric() {
            format!("S{d}")
        } else if self.group.is_alternating() {
            format!("A{d}")
        } else if self.group.is_cyclic() {
            format!("cyclic order {}", self.group.order())
        } else {
            format!("order {}", self.group.order())
        };
        let verdict = if self.uniform { "UNIFORM" } else { "NON-UNIFORM" };
        format!("{name}, {verdict}")
    }
}

fn is_input_error(e: &FibrationError) -> bool {
    matches!(
        e,
        FibrationError::ZeroForm
            | FibrationError::ZeroCenter
            | FibrationError::AmbiguousCenter { .. }
            | FibrationError::SingularCenter { .. }
            | FibrationError::Poly(crate::poly::PolyError::DimensionMismatch { .. })
    )
}

fn point_strings(p: &ComplexPoint) -> Vec<String> {
    p.coords().iter().map(|&z| format_complex(z)).collect()
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

enum AttemptError {
    Fatal(ClassifierError),
    Retry(String),
}

impl From<FibrationError> for AttemptError {
    fn from(e: FibrationError) -> Self {
        if is_input_error(&e) {
            AttemptError::Fatal(ClassifierError::Fibration(e))
        } else {
            AttemptError::Retry(e.to_string())
        }
    }
}

/// Runs the full pipeline, retrying with fresh derived seeds on numerical
/// degeneracy. Input problems (singular or ambiguous center, dimension
/// mismatch) fail immediately.
pub fn monodromy_report(
    f: &HomogeneousPoly,
    p: &ComplexPoint,
    seed: u64,
    tol: &Tolerances,
    opts: &TrackOptions,
) -> Result<MonodromyReport, ClassifierError> {
    if f.degree() < 2 {
        return Err(ClassifierError::Input(format!("degree must exceed 1, got {}", f.degree())));
    }
    let mut attempts = Vec::new();
    for attempt in 0..MAX_ATTEMPTS {
        let attempt_seed = if attempt == 0 { seed } else { derive_seed(seed, TAG_ATTEMPT, attempt) };
        let seeds = SeedRecord {
            seed,
            attempt_seed,
            frame_seed: derive_seed(attempt_seed, TAG_FRAME, 0),
            line_seed: derive_seed(attempt_seed, TAG_LINE, 0),
            loop_seed: derive_seed(attempt_seed, TAG_LOOPS, 0),
        };
        match run_once(f, p, &seeds, tol, opts) {
            Ok(mut report) => {
                attempts.push(AttemptRecord {
                    attempt,
                    seed: attempt_seed,
                    outcome: "ok".into(),
                });
                report.diagnostics.attempts = attempts;
                return Ok(report);
            }
            Err(AttemptError::Fatal(e)) => return Err(e),
            Err(AttemptError::Retry(msg)) => attempts.push(AttemptRecord {
                attempt,
                seed: attempt_seed,
                outcome: msg,
            }),
        }
    }
    Err(ClassifierError::NoVerdict { attempts })
}

fn run_once(
    f: &HomogeneousPoly,
    p: &ComplexPoint,
    seeds: &SeedRecord,
    tol: &Tolerances,
    opts: &TrackOptions,
) -> Result<MonodromyReport, AttemptError> {
    let inst = build_projection(f, p, seeds.frame_seed, tol)?;
    let fam = slice_to_family(&inst, seeds.line_seed, tol)?;
    let bps = branch_points(&fam, tol)?;
    let genericity = genericity_report(&fam, &bps, tol);
    let m = fam.fiber_degree();

    let (generators, basepoint, infinity, relation_holds, tracking) = if bps.is_empty() {
        let s0 = Complex64::new(1.1, 0.0);
        (Vec::new(), s0, Permutation::identity(m), true, TrackStats::default())
    } else {
        let plan = plan_loops(&bps, seeds.loop_seed, tol)?;
        let gens = monodromy_generators(&fam, &plan, tol, opts).map_err(|e| AttemptError::Retry(e.to_string()))?;
        if !gens.relation_holds {
            return Err(AttemptError::Retry("petal product times infinity loop is not the identity".into()));
        }
        (gens.generators, plan.basepoint, gens.infinity, gens.relation_holds, gens.stats)
    };

    let petal_cycle_types: Vec<Vec<usize>> = generators.iter().map(|g| g.cycle_type()).collect();
    let all_petals_transpositions = generators.iter().all(|g| g.is_transposition());
    let group = PermGroup::generate(m, generators).map_err(|e| AttemptError::Fatal(e.into()))?;
    if !group.is_transitive() {
        // X is irreducible, so a disconnected fiber means the tracking went wrong.
        return Err(AttemptError::Retry("monodromy group is not transitive".into()));
    }
    let kernel_self_test = (m >= 2 && m <= SELF_TEST_DEGREE).then(|| {
        (1..m).all(|k| lemma1_check(&group, 0, k).map(|(a, b)| a == b).unwrap_or(false))
    });
    let uniform = group.is_symmetric();
    Ok(MonodromyReport {
        instance: summarize(&inst),
        group_summary: GroupSummary::of(&group),
        group,
        uniform,
        diagnostics: Diagnostics {
            genericity,
            branch_count: bps.len(),
            discriminant_degree: bps.discriminant_degree,
            branch_points: bps.points.iter().map(|&z| pair(z)).collect(),
            basepoint: pair(basepoint),
            petal_cycle_types,
            infinity_permutation: infinity.to_string(),
            relation_holds,
            all_petals_transpositions,
            kernel_self_test,
            tracking,
            attempts: Vec::new(),
        },
        seeds: seeds.clone(),
        tolerances: tol.clone(),
    })
}

fn summarize(inst: &ProjectionInstance) -> InstanceSummary {
    InstanceSummary {
        degree: inst.degree(),
        dimension: inst.dimension(),
        center: point_strings(&inst.center),
        center_kind: inst.center_kind,
        center_value: inst.center_value,
        effective_degree: inst.effective_degree,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::{random_general_hypersurface, random_inner_center, random_outer_center};
    use crate::random::rng;
    use rand::seq::SliceRandom;

    #[test]
    fn random_cubic_outer_and_inner() {
        let tol = Tolerances::default();
        let opts = TrackOptions::default();
        let f = random_general_hypersurface(1, 3, 12).unwrap();
        let outer = monodromy_report(&f, &random_outer_center(&f, 1, &tol), 5, &tol, &opts).unwrap();
        assert_eq!(outer.group_summary.order, "6");
        assert!(outer.uniform);
        assert_eq!(outer.verdict_line(), "S3, UNIFORM");
        let inner = monodromy_report(&f, &random_inner_center(&f, 2).unwrap(), 5, &tol, &opts).unwrap();
        assert_eq!(inner.instance.center_kind, CenterKind::Inner);
        assert_eq!(inner.group.degree(), 2);
        assert!(inner.uniform);
    }

    #[test]
    fn fermat_quartic_is_cyclic() {
        let tol = Tolerances::default();
        let f = HomogeneousPoly::fermat(3, 4).unwrap();
        let p = ComplexPoint::from_real(&[0.0, 0.0, 1.0]);
        let r = monodromy_report(&f, &p, 1, &tol, &TrackOptions::default()).unwrap();
        assert_eq!(r.group_summary.order, "4");
        assert!(r.group.is_cyclic());
        assert!(!r.uniform);
        assert_eq!(r.verdict_line(), "cyclic order 4, NON-UNIFORM");
        // Each triple discriminant zero carries a 4-cycle.
        assert!(r.diagnostics.petal_cycle_types.iter().all(|t| t == &vec![4]));
    }

    #[test]
    fn conic_is_uniform() {
        let tol = Tolerances::default();
        let f = HomogeneousPoly::fermat(3, 2).unwrap();
        let r = monodromy_report(&f, &ComplexPoint::from_real(&[0.3, 1.0, -0.2]), 2, &tol, &TrackOptions::default())
            .unwrap();
        assert!(r.uniform);
        assert_eq!(r.group.degree(), 2);
        // Inner center of a conic: a single sheet.
        let inner = monodromy_report(&f, &ComplexPoint::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
        ]), 2, &tol, &TrackOptions::default())
        .unwrap();
        assert_eq!(inner.group.degree(), 1);
        assert!(inner.uniform);
    }

    #[test]
    fn relabeling_preserves_the_verdict() {
        let tol = Tolerances::default();
        let f = random_general_hypersurface(1, 4, 3).unwrap();
        let r = monodromy_report(&f, &random_outer_center(&f, 3, &tol), 3, &tol, &TrackOptions::default()).unwrap();
        let mut images: Vec<usize> = (0..4).collect();
        for k in 0..5 {
            images.shuffle(&mut rng(k));
            let h = Permutation::new(images.clone()).unwrap();
            let g = r.group.relabeled(&h).unwrap();
            assert_eq!(g.order(), r.group.order());
            assert_eq!(g.transitivity_degree(), r.group.transitivity_degree());
            assert_eq!(g.is_symmetric(), r.uniform);
            let sizes = |x: &PermGroup| x.pair_block_systems().iter().map(|s| s[0].len()).collect::<Vec<_>>();
            assert_eq!(sizes(&g), sizes(&r.group));
        }
    }

    #[test]
    fn singular_center_is_rejected() {
        let f = HomogeneousPoly::from_real_terms(3, 3, &[(&[1, 1, 1], 1.0)]).unwrap();
        let err = monodromy_report(
            &f,
            &ComplexPoint::from_real(&[1.0, 0.0, 0.0]),
            1,
            &Tolerances::default(),
            &TrackOptions::default(),
        );
        assert!(matches!(err, Err(ClassifierError::Fibration(FibrationError::SingularCenter { .. }))));
    }
}
