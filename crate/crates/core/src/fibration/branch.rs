use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::poly::{
    cmp_complex, discriminant_by_roots, discriminant_on_line, roots, sampled_discriminant, SampledDiscriminant,
    UnivariatePoly,
};
use crate::tolerances::Tolerances;
use crate::tracker::hungarian;

use super::family::FiberFamily;
use super::FibrationError;

/// Radius of the first sampling circle for the discriminant.
const PILOT_RADIUS: f64 = 1.0;
/// Growth factor between successive sampling circles.
const CIRCLE_RATIO: f64 = 4.0;
/// Newton steps when polishing a branch point; singular solutions converge
/// only linearly.
const POLISH_STEPS: usize = 200;
/// Zeros with a larger relative error estimate get a local interpolation.
const ZOOM_THRESHOLD: f64 = 1e-6;
/// Radius of the local circle in units of the error estimate.
const ZOOM_MARGIN: f64 = 4.0;
/// Cap on samples per circle when counting zeros.
const MAX_WINDING_SAMPLES: usize = 4096;

/// The branch points of a family on its base line.
///
/// Each point carries the multiplicity of the discriminant zero there; a point is
/// simple exactly when its multiplicity is one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchPointSet {
    #[serde(serialize_with = "crate::fibration::serialize_complex_vec")]
    pub points: Vec<Complex64>,
    pub multiplicities: Vec<usize>,
    pub simple_flags: Vec<bool>,
    pub min_separation: f64,
    /// Number of discriminant roots, with multiplicity.
    pub discriminant_degree: usize,
}

impl BranchPointSet {
    pub fn empty() -> Self {
        BranchPointSet {
            points: Vec::new(),
            multiplicities: Vec::new(),
            simple_flags: Vec::new(),
            min_separation: f64::INFINITY,
            discriminant_degree: 0,
        }
    }

    /// Builds a set from explicit points, all flagged simple.
    pub fn from_points(points: Vec<Complex64>) -> Self {
        let n = points.len();
        let min_separation = min_separation(&points);
        BranchPointSet {
            points,
            multiplicities: vec![1; n],
            simple_flags: vec![true; n],
            min_separation,
            discriminant_degree: n,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn all_simple(&self) -> bool {
        self.simple_flags.iter().all(|&f| f)
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }
}

/// Length scale for comparing two nearby points: discriminant roots far from
/// the origin carry proportionally larger errors.
pub(crate) fn local_scale(a: Complex64, b: Complex64) -> f64 {
    a.norm().max(b.norm()).max(1.0)
}

/// Whether two branch points are too close to be told apart reliably.
pub(crate) fn too_close(a: Complex64, b: Complex64, tol: &Tolerances) -> bool {
    (a - b).norm() < tol.branch_separation * local_scale(a, b)
}

pub(crate) fn min_separation(points: &[Complex64]) -> f64 {
    let mut best = f64::INFINITY;
    for (i, a) in points.iter().enumerate() {
        for b in &points[i + 1..] {
            best = best.min((a - b).norm());
        }
    }
    best
}

/// The discriminant of the family as a polynomial in `s`.
pub fn family_discriminant(fam: &FiberFamily) -> Result<UnivariatePoly, FibrationError> {
    Ok(discriminant_on_line(fam.coeffs(), PILOT_RADIUS)?)
}

/// Estimated distance from a computed zero to the true one.
fn zero_error(circle: &SampledDiscriminant, z: Complex64) -> f64 {
    circle.noise_at(z) / circle.slope(z).max(f64::MIN_POSITIVE)
}

/// Zeros of the discriminant with error estimates, each taken from the sampling
/// circle where it is most accurate.
///
/// Interpolation error is uniform on the sampling circle and grows outside it,
/// while zeros well inside a large circle drown in its larger samples. Circles
/// grow from the unit circle by a fixed ratio until they enclose every zero.
fn discriminant_zeros(fam: &FiberFamily) -> Result<Option<Vec<(Complex64, f64)>>, FibrationError> {
    let origin = Complex64::new(0.0, 0.0);
    let pilot = sampled_discriminant(fam.coeffs(), origin, PILOT_RADIUS)?;
    let degree = pilot.degree().unwrap_or(0);
    if degree == 0 {
        return Ok(None);
    }
    let mut zeros: Vec<(Complex64, f64)> = pilot.zeros()?.into_iter().map(|z| (z, zero_error(&pilot, z))).collect();
    let mut radius = PILOT_RADIUS;
    let reach = zeros.iter().map(|z| z.0.norm()).fold(0.0, f64::max);
    while radius < reach {
        radius = (radius * CIRCLE_RATIO).min(reach);
        let circle = sampled_discriminant(fam.coeffs(), origin, radius)?;
        if circle.degree() != Some(degree) {
            continue;
        }
        let candidates = circle.zeros()?;
        let cost: Vec<Vec<f64>> = zeros
            .iter()
            .map(|z| candidates.iter().map(|c| (z.0 - c).norm()).collect())
            .collect();
        for (i, j) in hungarian(&cost).into_iter().enumerate() {
            let e = zero_error(&circle, candidates[j]);
            if e < zeros[i].1 {
                zeros[i] = (candidates[j], e);
            }
        }
    }
    Ok(Some(zeros))
}

/// Starting points for polishing near a computed zero.
///
/// A well-conditioned zero is its own start. Otherwise the discriminant is
/// interpolated again on a small circle around it, where its values are small
/// and so are their errors, and every zero found inside becomes a start.
fn polish_starts(fam: &FiberFamily, z: Complex64, err: f64) -> Vec<Complex64> {
    let scale = z.norm().max(1.0);
    let mut starts = vec![z];
    if err <= ZOOM_THRESHOLD * scale {
        return starts;
    }
    let radius = (ZOOM_MARGIN * err).clamp(ZOOM_THRESHOLD * scale, 0.5 * scale);
    if let Ok(local) = sampled_discriminant(fam.coeffs(), z, radius) {
        if let Ok(zs) = local.zeros() {
            starts.extend(zs.into_iter().filter(|w| (w - z).norm() < radius));
        }
    }
    starts
}

/// Branch points of the family: the distinct zeros of its discriminant.
///
/// Zeros of the interpolated discriminant can be poorly conditioned when many
/// lie close together. Each estimate, refined locally when its error is large,
/// seeds Newton's method on `f = ∂f/∂t = 0` in `(s, t)`,
/// which is well conditioned at simple branch points. Multiplicities come from
/// winding numbers of the discriminant evaluated directly, and they must add up
/// to its degree. A family of fiber degree one has no branch points.
pub fn branch_points(fam: &FiberFamily, tol: &Tolerances) -> Result<BranchPointSet, FibrationError> {
    if fam.fiber_degree() < 2 {
        return Ok(BranchPointSet::empty());
    }
    let Some(raw) = discriminant_zeros(fam)? else {
        return Ok(BranchPointSet::empty());
    };
    let expected = raw.len();
    let mut found: Vec<Complex64> = Vec::new();
    for &(z, err) in &raw {
        for start in polish_starts(fam, z, err) {
            if let Some(b) = polish_branch_point(fam, start) {
                if !found.iter().any(|&w| (w - b).norm() < tol.branch_cluster * local_scale(w, b)) {
                    found.push(b);
                }
            }
        }
    }
    found.sort_by(cmp_complex);
    let mut points = Vec::new();
    let mut multiplicities = Vec::new();
    for (i, &b) in found.iter().enumerate() {
        let nearest = found
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .map(|(_, &w)| (w - b).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = (0.3 * nearest).min(tol.branch_separation * b.norm().max(1.0));
        let k = winding_number(fam, b, radius).unwrap_or(0);
        if k > 0 {
            points.push(b);
            multiplicities.push(k);
        }
    }
    let total: usize = multiplicities.iter().sum();
    if total != expected {
        return Err(FibrationError::MissingBranchPoints { found: total, expected });
    }
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            if too_close(a, b, tol) {
                return Err(FibrationError::BranchPointsTooClose { distance: (a - b).norm() });
            }
        }
    }
    Ok(BranchPointSet {
        simple_flags: multiplicities.iter().map(|&k| k == 1).collect(),
        min_separation: min_separation(&points),
        points,
        multiplicities,
        discriminant_degree: expected,
    })
}

/// Number of discriminant zeros inside the circle `|s - c| = r`, by the argument
/// principle with samples refined until consecutive phases differ by under a
/// radian.
fn winding_number(fam: &FiberFamily, c: Complex64, r: f64) -> Option<usize> {
    let value = |k: usize, n: usize| {
        let s = c + Complex64::from_polar(r, TAU * k as f64 / n as f64);
        discriminant_by_roots(&fam.fiber(s)).ok()
    };
    let mut n = 32;
    'refine: while n <= MAX_WINDING_SAMPLES {
        let mut total = 0.0;
        let mut prev = value(0, n)?;
        for k in 1..=n {
            let cur = value(k % n, n)?;
            let step = (cur / prev).arg();
            if step.abs() > 1.0 {
                n *= 2;
                continue 'refine;
            }
            total += step;
            prev = cur;
        }
        let turns = (total / TAU).round();
        return (turns >= 0.0).then_some(turns as usize);
    }
    None
}

/// Newton on the critical-point system from a start in `s` and the closest pair
/// of roots in its fiber. Returns `None` unless the iteration settles near its
/// start.
fn polish_branch_point(fam: &FiberFamily, s0: Complex64) -> Option<Complex64> {
    let fiber_roots = roots(&fam.fiber(s0)).ok()?;
    let mut pair = (0, 1);
    let mut best = f64::INFINITY;
    for i in 0..fiber_roots.len() {
        for j in i + 1..fiber_roots.len() {
            let gap = (fiber_roots[i] - fiber_roots[j]).norm();
            if gap < best {
                best = gap;
                pair = (i, j);
            }
        }
    }
    let (mut s, mut t) = (s0, 0.5 * (fiber_roots[pair.0] + fiber_roots[pair.1]));
    let reach = 0.1 * s0.norm().max(1.0);
    let mut settled = false;
    for _ in 0..POLISH_STEPS {
        let (f, _, fs) = fam.eval_all(s, t);
        let (ft, ftt, fts) = fam.eval_second(s, t);
        // Jacobian of (f, f_t) with respect to (s, t).
        let det = fs * ftt - ft * fts;
        if det.norm() == 0.0 || !det.is_finite() {
            settled = f.norm() == 0.0 && ft.norm() == 0.0;
            break;
        }
        let ds = (f * ftt - ft * ft) / det;
        let dt = (fs * ft - fts * f) / det;
        s -= ds;
        t -= dt;
        if (s - s0).norm() > reach || !s.is_finite() {
            return None;
        }
        if ds.norm() <= 4.0 * f64::EPSILON * (1.0 + s.norm()) && dt.norm() <= 4.0 * f64::EPSILON * (1.0 + t.norm()) {
            settled = true;
            break;
        }
    }
    // Singular solutions stall short of the step test; accept a small residual.
    if !settled {
        let (f, ft, _) = fam.eval_all(s, t);
        let size = fam.fiber(s).abs_eval(t).max(f64::MIN_POSITIVE);
        settled = f.norm() <= 1e-10 * size && ft.norm() <= 1e-6 * size;
    }
    settled.then_some(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::random_general_hypersurface;
    use crate::fibration::{build_projection, slice_to_family};
    use crate::poly::ComplexPoint;
    use crate::random::{gaussian_vector, rng};

    #[test]
    fn square_root_family_has_one_simple_point() {
        let fam = FiberFamily::from_coefficients(vec![
            UnivariatePoly::from_real(&[0.0, -1.0]),
            UnivariatePoly::zero(),
            UnivariatePoly::from_real(&[1.0]),
        ])
        .unwrap();
        let bps = branch_points(&fam, &Tolerances::default()).unwrap();
        assert_eq!(bps.len(), 1);
        assert!(bps.points[0].norm() < 1e-10);
        assert!(bps.all_simple());
    }

    #[test]
    fn cube_root_family_has_double_discriminant_zeros() {
        // t^3 + c(s), c = (s - 1)(s + 2)(s - 0.5i); Disc = -27 c^2.
        let zs = [Complex64::new(1.0, 0.0), Complex64::new(-2.0, 0.0), Complex64::new(0.0, 0.5)];
        let c = UnivariatePoly::from_roots(&zs);
        let fam = FiberFamily::from_coefficients(vec![
            c,
            UnivariatePoly::zero(),
            UnivariatePoly::zero(),
            UnivariatePoly::from_real(&[1.0]),
        ])
        .unwrap();
        let bps = branch_points(&fam, &Tolerances::default()).unwrap();
        assert_eq!(bps.len(), 3);
        assert_eq!(bps.multiplicities, vec![2, 2, 2]);
        assert!(!bps.all_simple());
        let mut expected = zs.to_vec();
        expected.sort_by(cmp_complex);
        for (a, b) in bps.points.iter().zip(&expected) {
            assert!((a - b).norm() < 1e-6);
        }
    }

    #[test]
    fn quartic_curve_has_twelve_simple_points() {
        let tol = Tolerances::default();
        let f = random_general_hypersurface(1, 4, 21).unwrap();
        let p = ComplexPoint::new(gaussian_vector(&mut rng(22), 3));
        let inst = build_projection(&f, &p, 23, &tol).unwrap();
        let fam = slice_to_family(&inst, 24, &tol).unwrap();
        let bps = branch_points(&fam, &tol).unwrap();
        assert_eq!(bps.len(), 12);
        assert!(bps.all_simple());
    }

    #[test]
    fn class_formula_for_plane_curves() {
        let tol = Tolerances::default();
        for d in 2..=5u32 {
            for trial in 0..3u64 {
                let seed = 100 * d as u64 + trial;
                let f = random_general_hypersurface(1, d, seed).unwrap();
                let p = ComplexPoint::new(gaussian_vector(&mut rng(seed + 1), 3));
                let inst = build_projection(&f, &p, seed + 2, &tol).unwrap();
                let fam = slice_to_family(&inst, seed + 3, &tol).unwrap();
                let bps = branch_points(&fam, &tol).unwrap();
                let d = d as usize;
                assert_eq!(bps.len(), d * (d - 1), "d = {d}, trial {trial}");
                assert!(bps.all_simple());
                // Every branch point is a genuine double root of its fiber.
                for &b in &bps.points {
                    let fiber = fam.fiber(b);
                    let rs = roots(&fiber).unwrap();
                    let closest = (0..rs.len())
                        .flat_map(|i| (i + 1..rs.len()).map(move |j| (i, j)))
                        .map(|(i, j)| (rs[i] - rs[j]).norm())
                        .fold(f64::INFINITY, f64::min);
                    assert!(closest < 1e-6, "d = {d}: nearest fiber roots {closest:e}");
                }
            }
        }
    }

    #[test]
    fn inner_plane_curve_count() {
        let tol = Tolerances::default();
        for d in 3..=5u32 {
            let f = random_general_hypersurface(1, d, 7 + d as u64).unwrap();
            let p = crate::classifier::random_inner_center(&f, 3).unwrap();
            let inst = build_projection(&f, &p, 5, &tol).unwrap();
            let fam = slice_to_family(&inst, 6, &tol).unwrap();
            let bps = branch_points(&fam, &tol).unwrap();
            let d = d as usize;
            assert_eq!(bps.len(), d * (d - 1) - 2);
        }
    }
}
