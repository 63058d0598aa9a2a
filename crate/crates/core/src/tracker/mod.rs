//! Predictor-corrector continuation of fiber roots along paths in the base
//! line, and the permutations induced by closed loops.

mod matching;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::fibration::{FiberFamily, LoopPlan, PathSegment};
use crate::permgroup::Permutation;
use crate::poly::{roots_with_tolerance, PolyError};
use crate::tolerances::Tolerances;

pub use matching::hungarian;

const MAX_NEWTON: usize = 10;
/// Largest predicted root motion per step, as a fraction of the root separation.
const MOTION_FRACTION: f64 = 0.25;
/// Largest Newton correction per step, as a fraction of the root separation.
const CORRECTION_FRACTION: f64 = 0.05;
const INITIAL_STEP: f64 = 0.05;
const GROWTH: f64 = 1.5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TrackError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("step size fell below the floor near s = {s}")]
    StepFloor { s: Complex64 },
    #[error("fiber roots collide near s = {s} (separation {separation:e})")]
    Collision { s: Complex64, separation: f64 },
    #[error("loop endpoint matching is ambiguous (distance {distance:e}, separation {separation:e})")]
    AmbiguousMatching { distance: f64, separation: f64 },
    #[error("path does not start at the state's base position")]
    Discontinuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrackOptions {
    /// Pieces each petal circle and the infinity circle are split into.
    pub arc_segments: usize,
}

impl Default for TrackOptions {
    fn default() -> Self {
        TrackOptions { arc_segments: 32 }
    }
}

/// The labeled fiber over a base position `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberState {
    pub s: Complex64,
    /// Root `i` carries label `i`.
    pub roots: Vec<Complex64>,
}

impl FiberState {
    /// Solves the fiber at `s`, labels following the (re, im) order of the roots.
    pub fn at(fam: &FiberFamily, s: Complex64, tol: &Tolerances) -> Result<Self, TrackError> {
        let fiber = fam.fiber(s);
        let roots = if fam.fiber_degree() == 0 {
            Vec::new()
        } else {
            roots_with_tolerance(&fiber, tol.root_residual)?
        };
        let state = FiberState { s, roots };
        let sep = state.min_separation();
        if sep <= tol.collision * state.scale() {
            return Err(TrackError::Collision { s, separation: sep });
        }
        Ok(state)
    }

    pub fn min_separation(&self) -> f64 {
        min_separation(&self.roots)
    }

    /// Largest root modulus, at least 1.
    pub fn scale(&self) -> f64 {
        self.roots.iter().map(|r| r.norm()).fold(1.0, f64::max)
    }
}

fn min_separation(roots: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in roots.iter().enumerate() {
        for b in &roots[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// Counters for one tracking run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct TrackStats {
    pub accepted: usize,
    pub rejected: usize,
}

struct Tracker<'a> {
    fam: &'a FiberFamily,
    tol: &'a Tolerances,
    /// Collision distance, fixed from the fiber scale at the start of the path.
    collision: f64,
    stats: TrackStats,
}

impl Tracker<'_> {
    /// Davidenko right-hand side `dt/dτ = -f_s / f_t · ds/dτ` for every root.
    fn slope(&self, seg: &PathSegment, tau: f64, ys: &[Complex64]) -> Option<Vec<Complex64>> {
        let s = seg.point(tau);
        let v = seg.velocity(tau);
        ys.iter()
            .map(|&t| {
                let (_, ft, fs) = self.fam.eval_all(s, t);
                if ft.norm() == 0.0 {
                    None
                } else {
                    Some(-fs / ft * v)
                }
            })
            .collect()
    }

    fn rk4(&self, seg: &PathSegment, tau: f64, h: f64, y: &[Complex64]) -> Option<Vec<Complex64>> {
        let axpy = |a: &[Complex64], k: &[Complex64], c: f64| -> Vec<Complex64> {
            a.iter().zip(k).map(|(x, d)| x + d * c).collect()
        };
        let k1 = self.slope(seg, tau, y)?;
        let k2 = self.slope(seg, tau + h / 2.0, &axpy(y, &k1, h / 2.0))?;
        let k3 = self.slope(seg, tau + h / 2.0, &axpy(y, &k2, h / 2.0))?;
        let k4 = self.slope(seg, tau + h, &axpy(y, &k3, h))?;
        Some(
            (0..y.len())
                .map(|i| y[i] + (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (h / 6.0))
                .collect(),
        )
    }

    fn newton(&self, s: Complex64, t0: Complex64) -> Option<Complex64> {
        let mut t = t0;
        for _ in 0..MAX_NEWTON {
            let (f, ft, _) = self.fam.eval_all(s, t);
            if ft.norm() == 0.0 {
                return None;
            }
            let delta = f / ft;
            t -= delta;
            if !t.is_finite() {
                return None;
            }
            if delta.norm() <= self.tol.newton * t.norm().max(1.0) {
                return Some(t);
            }
        }
        None
    }

    fn segment(&mut self, seg: &PathSegment, start: &[Complex64]) -> Result<Vec<Complex64>, TrackError> {
        let mut y = start.to_vec();
        let mut tau = 0.0;
        let mut h = INITIAL_STEP;
        while tau < 1.0 {
            h = h.min(1.0 - tau);
            if h < self.tol.step_floor {
                return Err(TrackError::StepFloor { s: seg.point(tau) });
            }
            match self.try_step(seg, tau, h, &y) {
                Some(next) => {
                    self.stats.accepted += 1;
                    y = next;
                    tau = if tau + h >= 1.0 - 1e-15 { 1.0 } else { tau + h };
                    h *= GROWTH;
                }
                None => {
                    self.stats.rejected += 1;
                    h /= 2.0;
                }
            }
        }
        Ok(y)
    }

    fn try_step(&self, seg: &PathSegment, tau: f64, h: f64, y: &[Complex64]) -> Option<Vec<Complex64>> {
        let sep = min_separation(y);
        let predicted = self.rk4(seg, tau, h, y)?;
        let motion = y.iter().zip(&predicted).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        if motion > MOTION_FRACTION * sep {
            return None;
        }
        let s_next = seg.point((tau + h).min(1.0));
        let mut corrected = Vec::with_capacity(y.len());
        for &p in &predicted {
            let t = self.newton(s_next, p)?;
            if (t - p).norm() > CORRECTION_FRACTION * sep {
                return None;
            }
            corrected.push(t);
        }
        if min_separation(&corrected) <= self.collision {
            return None;
        }
        Some(corrected)
    }
}

/// Transports the fiber along a path of segments.
pub fn track_path(
    fam: &FiberFamily,
    state: &FiberState,
    path: &[PathSegment],
    tol: &Tolerances,
) -> Result<(FiberState, TrackStats), TrackError> {
    let mut tracker = Tracker {
        fam,
        tol,
        collision: tol.collision * state.scale(),
        stats: TrackStats::default(),
    };
    let mut roots = state.roots.clone();
    let mut s = state.s;
    for seg in path {
        if (seg.start_point() - s).norm() > 1e-9 * s.norm().max(1.0) {
            return Err(TrackError::Discontinuous);
        }
        if roots.len() > 0 {
            roots = tracker.segment(seg, &roots)?;
        }
        s = seg.end_point();
    }
    Ok((FiberState { s, roots }, tracker.stats))
}

/// Transports the fiber along the straight segment to `s_target`.
pub fn track_segment(
    fam: &FiberFamily,
    state: &FiberState,
    s_target: Complex64,
    tol: &Tolerances,
) -> Result<FiberState, TrackError> {
    if s_target == state.s {
        return Ok(state.clone());
    }
    let seg = PathSegment::Line {
        from: state.s,
        to: s_target,
    };
    Ok(track_path(fam, state, &[seg], tol)?.0)
}

/// The permutation of basepoint labels induced by a closed path: label `i` goes
/// to the label of the root where root `i` ends up.
pub fn track_loop(
    fam: &FiberFamily,
    base: &FiberState,
    path: &[PathSegment],
    tol: &Tolerances,
) -> Result<(Permutation, TrackStats), TrackError> {
    let (end, stats) = track_path(fam, base, path, tol)?;
    Ok((match_fibers(&end.roots, &base.roots, tol.collision * base.scale())?, stats))
}

/// Matches `end[i]` to `base[σ(i)]` by minimal total distance, requiring every
/// matched pair closer than `threshold` and far closer than any two base roots.
pub fn match_fibers(end: &[Complex64], base: &[Complex64], threshold: f64) -> Result<Permutation, TrackError> {
    let cost: Vec<Vec<f64>> = end.iter().map(|a| base.iter().map(|b| (a - b).norm()).collect()).collect();
    let assignment = hungarian(&cost);
    let worst = assignment
        .iter()
        .enumerate()
        .map(|(i, &j)| cost[i][j])
        .fold(0.0, f64::max);
    let separation = min_separation(base);
    if worst >= threshold || 2.0 * worst >= separation {
        return Err(TrackError::AmbiguousMatching {
            distance: worst,
            separation,
        });
    }
    Ok(Permutation::new(assignment).expect("an assignment is a bijection"))
}

/// Petal permutations, the infinity-loop permutation, and the product check.
#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyGenerators {
    pub base: FiberState,
    pub generators: Vec<Permutation>,
    pub infinity: Permutation,
    /// Whether the petals in order followed by the infinity loop give the identity.
    pub relation_holds: bool,
    pub stats: TrackStats,
}

/// Tracks every petal (in parallel) and the infinity loop.
pub fn monodromy_generators(
    fam: &FiberFamily,
    plan: &LoopPlan,
    tol: &Tolerances,
    opts: &TrackOptions,
) -> Result<MonodromyGenerators, TrackError> {
    let base = FiberState::at(fam, plan.basepoint, tol)?;
    let generators = petal_permutations(fam, &base, plan, tol, opts, false)?;
    let (infinity, inf_stats) = track_loop(fam, &base, &plan.infinity_loop(opts.arc_segments), tol)?;
    let mut stats = inf_stats;
    for (_, s) in &generators {
        stats.accepted += s.accepted;
        stats.rejected += s.rejected;
    }
    let generators: Vec<Permutation> = generators.into_iter().map(|(g, _)| g).collect();
    let product = generators
        .iter()
        .fold(Permutation::identity(base.roots.len()), |acc, g| acc.then(g));
    let relation_holds = product.then(&infinity).is_identity();
    Ok(MonodromyGenerators {
        base,
        generators,
        infinity,
        relation_holds,
        stats,
    })
}

/// One permutation per petal, in plan order.
pub fn petal_permutations(
    fam: &FiberFamily,
    base: &FiberState,
    plan: &LoopPlan,
    tol: &Tolerances,
    opts: &TrackOptions,
    clockwise: bool,
) -> Result<Vec<(Permutation, TrackStats)>, TrackError> {
    plan.petals
        .par_iter()
        .map(|petal| track_loop(fam, base, &petal.to_loop(opts.arc_segments, clockwise), tol))
        .collect()
}
