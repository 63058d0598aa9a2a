use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::random::rng;
use crate::tolerances::Tolerances;

use super::branch::{too_close, BranchPointSet};
use super::FibrationError;

/// Petal radius as a fraction of the distance to the nearest other branch point.
const PETAL_FRACTION: f64 = 0.4;
/// Approach paths keep this multiple of a foreign petal radius from its center.
const DETOUR_FACTOR: f64 = 1.1;

/// A piece of a path in the base line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathSegment {
    Line {
        #[serde(serialize_with = "crate::fibration::serialize_complex")]
        from: Complex64,
        #[serde(serialize_with = "crate::fibration::serialize_complex")]
        to: Complex64,
    },
    /// `center + radius e^{iθ}` for θ running from `start` to `end`.
    Arc {
        #[serde(serialize_with = "crate::fibration::serialize_complex")]
        center: Complex64,
        radius: f64,
        start: f64,
        end: f64,
    },
}

impl PathSegment {
    /// Position at parameter `tau` in `[0, 1]`.
    pub fn point(&self, tau: f64) -> Complex64 {
        match *self {
            PathSegment::Line { from, to } => from + (to - from) * tau,
            PathSegment::Arc { center, radius, start, end } => {
                center + Complex64::from_polar(radius, start + (end - start) * tau)
            }
        }
    }

    /// Derivative of the position with respect to `tau`.
    pub fn velocity(&self, tau: f64) -> Complex64 {
        match *self {
            PathSegment::Line { from, to } => to - from,
            PathSegment::Arc { radius, start, end, .. } => {
                let theta = start + (end - start) * tau;
                Complex64::new(0.0, end - start) * Complex64::from_polar(radius, theta)
            }
        }
    }

    pub fn start_point(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end_point(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn reversed(&self) -> PathSegment {
        match *self {
            PathSegment::Line { from, to } => PathSegment::Line { from: to, to: from },
            PathSegment::Arc { center, radius, start, end } => PathSegment::Arc {
                center,
                radius,
                start: end,
                end: start,
            },
        }
    }

    /// Splits an arc into `pieces` equal arcs; lines are returned unchanged.
    pub fn subdivided(&self, pieces: usize) -> Vec<PathSegment> {
        match *self {
            PathSegment::Line { .. } => vec![*self],
            PathSegment::Arc { center, radius, start, end } => (0..pieces)
                .map(|k| PathSegment::Arc {
                    center,
                    radius,
                    start: start + (end - start) * k as f64 / pieces as f64,
                    end: start + (end - start) * (k + 1) as f64 / pieces as f64,
                })
                .collect(),
        }
    }

    /// Smallest distance from the segment to `z`.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        match *self {
            PathSegment::Line { from, to } => {
                let d = to - from;
                let len2 = d.norm_sqr();
                if len2 == 0.0 {
                    return (z - from).norm();
                }
                let u = ((z - from) * d.conj()).re / len2;
                (z - self.point(u.clamp(0.0, 1.0))).norm()
            }
            PathSegment::Arc { center, radius, start, end } => {
                let dz = z - center;
                let theta = dz.arg();
                let (lo, hi) = if start <= end { (start, end) } else { (end, start) };
                let inside = (0..3).any(|w| {
                    let t = theta + TAU * (w as f64 - 1.0);
                    t >= lo && t <= hi
                }) || hi - lo >= TAU;
                if inside {
                    (dz.norm() - radius).abs()
                } else {
                    (z - self.start_point()).norm().min((z - self.end_point()).norm())
                }
            }
        }
    }
}

/// One standard generator: approach, a full circle, and the way back.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Petal {
    #[serde(serialize_with = "crate::fibration::serialize_complex")]
    pub branch_point: Complex64,
    pub radius: f64,
    /// From the basepoint to the entry point on the circle.
    pub approach: Vec<PathSegment>,
    /// Angle of the entry point as seen from the branch point.
    pub entry_angle: f64,
}

impl Petal {
    /// The closed loop, circling counterclockwise unless `clockwise`, with the
    /// circle split into `arc_segments` pieces.
    pub fn to_loop(&self, arc_segments: usize, clockwise: bool) -> Vec<PathSegment> {
        let sweep = if clockwise { -TAU } else { TAU };
        let circle = PathSegment::Arc {
            center: self.branch_point,
            radius: self.radius,
            start: self.entry_angle,
            end: self.entry_angle + sweep,
        };
        let mut out = self.approach.clone();
        out.extend(circle.subdivided(arc_segments.max(1)));
        out.extend(self.approach.iter().rev().map(|s| s.reversed()));
        out
    }
}

/// Basepoint, petals, and the loop around all branch points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LoopPlan {
    #[serde(serialize_with = "crate::fibration::serialize_complex")]
    pub basepoint: Complex64,
    pub petals: Vec<Petal>,
    /// Radius of the clockwise circle about the origin through the basepoint.
    pub infinity_radius: f64,
}

impl LoopPlan {
    /// The clockwise circle `|s| = |s0|` starting and ending at the basepoint.
    ///
    /// Read from outside it is a loop around infinity, so that the petals in plan
    /// order followed by this loop compose to the identity.
    pub fn infinity_loop(&self, arc_segments: usize) -> Vec<PathSegment> {
        let start = self.basepoint.arg();
        PathSegment::Arc {
            center: Complex64::new(0.0, 0.0),
            radius: self.infinity_radius,
            start,
            end: start - TAU,
        }
        .subdivided(arc_segments.max(1))
    }
}

/// Plans loops from a seeded random basepoint on `|s| = 1.1 (max |b| + 1)`.
pub fn plan_loops(bps: &BranchPointSet, seed: u64, tol: &Tolerances) -> Result<LoopPlan, FibrationError> {
    let big_r = bps.max_modulus() + 1.0;
    let angle = rng(seed).random_range(0.0..TAU);
    plan_loops_with_basepoint(bps, Complex64::from_polar(1.1 * big_r, angle), tol)
}

/// Plans loops from a given basepoint, which must lie outside the disk
/// `|s| <= max |b|`.
pub fn plan_loops_with_basepoint(
    bps: &BranchPointSet,
    basepoint: Complex64,
    tol: &Tolerances,
) -> Result<LoopPlan, FibrationError> {
    let points = &bps.points;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            if too_close(*a, *b, tol) {
                return Err(FibrationError::BranchPointsTooClose { distance: (a - b).norm() });
            }
        }
    }
    if basepoint.norm() <= bps.max_modulus() {
        return Err(FibrationError::BasepointInside);
    }

    let radii: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(i, &b)| {
            let nearest = points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &c)| (b - c).norm())
                .fold(f64::INFINITY, f64::min);
            (PETAL_FRACTION * nearest).min(PETAL_FRACTION * (basepoint - b).norm())
        })
        .collect();

    let toward_origin = -basepoint;
    let mut order: Vec<usize> = (0..points.len()).collect();
    let key = |i: usize| ((points[i] - basepoint) / toward_origin).arg();
    order.sort_by(|&i, &j| {
        key(i)
            .total_cmp(&key(j))
            .then((points[i] - basepoint).norm().total_cmp(&(points[j] - basepoint).norm()))
    });

    let petals = order
        .into_iter()
        .map(|i| {
            let b = points[i];
            let r = radii[i];
            let outward = (basepoint - b) / (basepoint - b).norm();
            let entry = b + outward * r;
            let obstacles: Vec<(Complex64, f64)> = points
                .iter()
                .zip(&radii)
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, (&c, &rc))| (c, DETOUR_FACTOR * rc))
                .collect();
            Petal {
                branch_point: b,
                radius: r,
                approach: approach_path(basepoint, entry, &obstacles),
                entry_angle: outward.arg(),
            }
        })
        .collect();

    Ok(LoopPlan {
        basepoint,
        petals,
        infinity_radius: basepoint.norm(),
    })
}

/// Straight path from `from` to `to` that swings around every obstacle disk it
/// would cross, along the shorter arc, which is homotopic to the straight path
/// in the complement of the obstacle centers.
fn approach_path(from: Complex64, to: Complex64, obstacles: &[(Complex64, f64)]) -> Vec<PathSegment> {
    let d = to - from;
    let len = d.norm();
    let dir = d / len;
    // (entry parameter, exit parameter, center, radius)
    let mut hits: Vec<(f64, f64, Complex64, f64)> = Vec::new();
    for &(c, rho) in obstacles {
        let rel = (c - from) / dir;
        let (along, across) = (rel.re, rel.im);
        if across.abs() >= rho {
            continue;
        }
        let half = (rho * rho - across * across).sqrt();
        let (u0, u1) = (along - half, along + half);
        if u1 <= 0.0 || u0 >= len {
            continue;
        }
        hits.push((u0.max(0.0), u1.min(len), c, rho));
    }
    hits.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut out = Vec::new();
    let mut cursor = from;
    for (u0, u1, c, rho) in hits {
        let p0 = from + dir * u0;
        let p1 = from + dir * u1;
        if (p0 - cursor).norm() > 0.0 {
            out.push(PathSegment::Line { from: cursor, to: p0 });
        }
        let a0 = (p0 - c).arg();
        let mut a1 = (p1 - c).arg();
        // The chord lies on the far side of c from the line's left; the arc on
        // that side runs counterclockwise when c is to the left of the path.
        // A path straight through c also goes counterclockwise.
        let side = ((c - from) / dir).im;
        let ccw = side >= 0.0;
        if ccw {
            while a1 <= a0 {
                a1 += TAU;
            }
        } else {
            while a1 >= a0 {
                a1 -= TAU;
            }
        }
        debug_assert!((a1 - a0).abs() <= PI + 1e-9);
        out.push(PathSegment::Arc {
            center: c,
            radius: rho,
            start: a0,
            end: a1,
        });
        cursor = p1;
    }
    if (to - cursor).norm() > 0.0 || out.is_empty() {
        out.push(PathSegment::Line { from: cursor, to });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::complex_gaussian;
    use proptest::prelude::*;

    fn check_invariants(bps: &BranchPointSet, plan: &LoopPlan) {
        let pts = &bps.points;
        let mut last = f64::NEG_INFINITY;
        for petal in &plan.petals {
            let b = petal.branch_point;
            let nearest = pts
                .iter()
                .filter(|&&c| c != b)
                .map(|&c| (b - c).norm())
                .fold(f64::INFINITY, f64::min);
            assert!(petal.radius <= 0.5 * nearest);
            assert!((plan.basepoint - b).norm() >= 2.0 * petal.radius);
            let angle = ((b - plan.basepoint) / -plan.basepoint).arg();
            assert!(angle >= last);
            last = angle;
            // Path continuity and distance from the other branch points.
            let path = petal.to_loop(8, false);
            assert!((path[0].start_point() - plan.basepoint).norm() < 1e-12);
            assert!((path.last().unwrap().end_point() - plan.basepoint).norm() < 1e-12);
            for w in path.windows(2) {
                assert!((w[0].end_point() - w[1].start_point()).norm() < 1e-9);
            }
            for other in &plan.petals {
                if other.branch_point == b {
                    continue;
                }
                for seg in &petal.approach {
                    assert!(seg.distance_to(other.branch_point) >= 0.5 * other.radius);
                }
            }
        }
    }

    #[test]
    fn single_point_at_origin() {
        let bps = BranchPointSet::from_points(vec![Complex64::new(0.0, 0.0)]);
        let plan = plan_loops(&bps, 3, &Tolerances::default()).unwrap();
        assert!((plan.basepoint.norm() - 1.1).abs() < 1e-12);
        assert_eq!(plan.petals.len(), 1);
        assert!(plan.petals[0].radius <= 1.0);
        check_invariants(&bps, &plan);
    }

    #[test]
    fn two_points() {
        let bps = BranchPointSet::from_points(vec![Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)]);
        let plan = plan_loops(&bps, 5, &Tolerances::default()).unwrap();
        assert_eq!(plan.petals.len(), 2);
        assert!(plan.petals.iter().all(|p| p.radius <= 1.0));
        check_invariants(&bps, &plan);
    }

    #[test]
    fn collinear_points_get_detours() {
        let pts = vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)];
        let bps = BranchPointSet::from_points(pts);
        let plan = plan_loops_with_basepoint(&bps, Complex64::new(3.3, 0.0), &Tolerances::default()).unwrap();
        let far = plan.petals.iter().find(|p| p.branch_point.re == 0.0).unwrap();
        assert!(far.approach.iter().filter(|s| matches!(s, PathSegment::Arc { .. })).count() == 2);
        check_invariants(&bps, &plan);
    }

    #[test]
    fn rejects_close_points() {
        let bps = BranchPointSet::from_points(vec![Complex64::new(0.0, 0.0), Complex64::new(1e-5, 0.0)]);
        assert!(matches!(
            plan_loops(&bps, 1, &Tolerances::default()),
            Err(FibrationError::BranchPointsTooClose { .. })
        ));
    }

    proptest! {
        #[test]
        fn random_plans_satisfy_invariants(seed in 0u64..10_000, n in 1usize..14) {
            let mut r = rng(seed);
            let pts: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut r) * 2.0).collect();
            let bps = BranchPointSet::from_points(pts);
            prop_assume!(bps.min_separation > 1e-2);
            let plan = plan_loops(&bps, seed, &Tolerances::default()).unwrap();
            check_invariants(&bps, &plan);
        }
    }
}
