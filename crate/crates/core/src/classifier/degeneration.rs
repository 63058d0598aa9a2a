use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::fibration::{
    branch_points, build_projection, dot, plan_loops_with_basepoint, slice_to_family, slice_with_line, CenterKind,
    FiberFamily,
};
use crate::permgroup::{PermGroup, Permutation};
use crate::poly::{ComplexPoint, HomogeneousPoly};
use crate::random::{complex_gaussian, derive_seed, gaussian_vector, rng};
use crate::tolerances::Tolerances;
use crate::tracker::{hungarian, monodromy_generators, FiberState, TrackOptions};

use super::instances::{random_general_hypersurface, random_outer_center};
use super::ClassifierError;

const MAX_HALVINGS: usize = 20;
const MAX_ATTEMPTS: u64 = 5;

const TAG_FRAME: u64 = 0xd1;
const TAG_LINE: u64 = 0xd2;
const TAG_BASE: u64 = 0xd3;
const TAG_PHASE: u64 = 0xd4;
const TAG_INPUT: u64 = 0xd5;

/// The pencil `X_s = {Y H + s F = 0}` and the center.
#[derive(Debug, Clone, PartialEq)]
pub struct DegenerationInput {
    pub y: HomogeneousPoly,
    pub h: HomogeneousPoly,
    pub f: HomogeneousPoly,
    pub center: ComplexPoint,
}

/// Result for one requested value of `s`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContainmentRow {
    pub s_requested: [f64; 2],
    pub s_used: [f64; 2],
    pub halvings: usize,
    /// Worst matched distance over the smallest gap between target roots.
    pub matching_margin: f64,
    /// `label_matching[j]` is the X_s label of Y-label `j`; the last entry is
    /// the H-root.
    pub label_matching: Vec<usize>,
    pub m0_generators: Vec<String>,
    pub ms_order: String,
    pub ms_generators: Vec<String>,
    /// The M0 generators after extension and relabeling, in X_s labels.
    pub embedded_generators: Vec<String>,
    pub contained: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegenerationExperiment {
    pub degree: usize,
    pub m0_order: String,
    pub center_on_h: bool,
    pub rows: Vec<ContainmentRow>,
    pub seed: u64,
}

impl DegenerationExperiment {
    pub fn all_contained(&self) -> bool {
        self.rows.iter().all(|r| r.contained)
    }
}

/// Random `Y` of degree `d - 1`, hyperplane `H`, `F` of degree `d` and outer center.
pub fn random_degeneration_input(n: usize, d: u32, seed: u64) -> Result<DegenerationInput, ClassifierError> {
    if d < 3 {
        return Err(ClassifierError::Input(format!("degeneration needs d >= 3, got {d}")));
    }
    let y = random_general_hypersurface(n, d - 1, derive_seed(seed, TAG_INPUT, 0))?;
    let f = random_general_hypersurface(n, d, derive_seed(seed, TAG_INPUT, 1))?;
    let h = HomogeneousPoly::linear(&gaussian_vector(&mut rng(derive_seed(seed, TAG_INPUT, 2)), n + 2))
        .map_err(|e| ClassifierError::Input(e.to_string()))?;
    let yh = y.mul(&h).map_err(|e| ClassifierError::Input(e.to_string()))?;
    let center = random_outer_center(&yh, derive_seed(seed, TAG_INPUT, 3), &Tolerances::default());
    Ok(DegenerationInput { y, h, f, center })
}

/// `{1e-2, 1e-3}` times seeded random phases.
pub fn default_s_values(seed: u64) -> Vec<Complex64> {
    let mut r = rng(derive_seed(seed, TAG_PHASE, 0));
    [1e-2, 1e-3]
        .iter()
        .map(|&m| Complex64::from_polar(m, r.random_range(0.0..std::f64::consts::TAU)))
        .collect()
}

fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

/// Checks that the monodromy of the projection of `Y` from `P`, extended by
/// fixing the H-label, lies in the monodromy of the projection of `X_s` for each
/// `s`. Fiber labels are identified through the roots over a shared basepoint.
pub fn degeneration_experiment(
    input: &DegenerationInput,
    s_values: &[Complex64],
    seed: u64,
    tol: &Tolerances,
    opts: &TrackOptions,
) -> Result<DegenerationExperiment, ClassifierError> {
    let DegenerationInput { y, h, f, center } = input;
    let n_vars = y.num_vars();
    if h.num_vars() != n_vars || f.num_vars() != n_vars || center.dim() != n_vars {
        return Err(ClassifierError::Input("Y, H, F and the point need the same number of variables".into()));
    }
    if h.degree() != 1 {
        return Err(ClassifierError::Input(format!("H must be linear, got degree {}", h.degree())));
    }
    if f.degree() != y.degree() + 1 || f.degree() < 2 {
        return Err(ClassifierError::Input(format!(
            "F must have degree deg Y + 1 >= 2, got deg Y = {}, deg F = {}",
            y.degree(),
            f.degree()
        )));
    }
    let p = center
        .normalized()
        .ok_or_else(|| ClassifierError::Input("the center is the zero vector".into()))?;
    let on = |g: &HomogeneousPoly| g.unit_scaled().eval(p.coords()).map(|v| v.norm() < tol.inner_threshold);
    let on_y = on(y).map_err(|e| ClassifierError::Input(e.to_string()))?;
    let on_h = on(h).map_err(|e| ClassifierError::Input(e.to_string()))?;
    if on_y && on_h {
        return Err(ClassifierError::Unsupported(
            "center on singular locus of X0 (P lies on Y and on H)".into(),
        ));
    }
    if on_y {
        return Err(ClassifierError::Unsupported(
            "center on Y but off H: the fiber degrees of Y and X_s differ by two".into(),
        ));
    }
    let yh = y.mul(h).map_err(|e| ClassifierError::Input(e.to_string()))?;

    let d = f.degree() as usize;
    let mut last_err = String::new();
    for attempt in 0..MAX_ATTEMPTS {
        let attempt_seed = derive_seed(seed, 0xde, attempt);
        let result: Result<Vec<ContainmentRow>, String> = (|| {
            let frame_seed = derive_seed(attempt_seed, TAG_FRAME, 0);
            let inst_y = build_projection(y, &p, frame_seed, tol).map_err(|e| e.to_string())?;
            let fam_y = slice_to_family(&inst_y, derive_seed(attempt_seed, TAG_LINE, 0), tol).map_err(|e| e.to_string())?;
            let bps_y = branch_points(&fam_y, tol).map_err(|e| e.to_string())?;
            let (q0, q1) = fam_y.line();
            let (q0, q1) = (q0.to_vec(), q1.to_vec());
            let base_angle = rng(derive_seed(attempt_seed, TAG_BASE, 0)).random_range(0.0..std::f64::consts::TAU);

            s_values
                .par_iter()
                .map(|&s| {
                    let ctx = Shared {
                        yh: &yh,
                        f,
                        h,
                        p: &p,
                        q0: &q0,
                        q1: &q1,
                        frame_seed,
                        fam_y: &fam_y,
                        bps_y: &bps_y.points,
                        base_angle,
                        d,
                        tol,
                        opts,
                    };
                    ctx.row(s)
                })
                .collect()
        })();
        match result {
            Ok(rows) => {
                let m0_order = rows
                    .first()
                    .map(|r| {
                        let gens = r
                            .m0_generators
                            .iter()
                            .map(|g| Permutation::parse(g, d - 1).expect("printed by us"))
                            .collect();
                        PermGroup::generate(d - 1, gens).expect("valid generators").order().to_string()
                    })
                    .unwrap_or_else(|| "1".into());
                return Ok(DegenerationExperiment {
                    degree: d,
                    m0_order,
                    center_on_h: on_h,
                    rows,
                    seed,
                });
            }
            Err(e) => last_err = e,
        }
    }
    Err(ClassifierError::Degenerate(format!(
        "degeneration experiment failed after {MAX_ATTEMPTS} attempts: {last_err}"
    )))
}

struct Shared<'a> {
    yh: &'a HomogeneousPoly,
    f: &'a HomogeneousPoly,
    h: &'a HomogeneousPoly,
    p: &'a ComplexPoint,
    q0: &'a [Complex64],
    q1: &'a [Complex64],
    frame_seed: u64,
    fam_y: &'a FiberFamily,
    bps_y: &'a [Complex64],
    base_angle: f64,
    d: usize,
    tol: &'a Tolerances,
    opts: &'a TrackOptions,
}

struct Matching {
    /// target label -> X label
    map: Vec<usize>,
    margin: f64,
}

impl Shared<'_> {
    fn family_at(&self, s: Complex64) -> Result<FiberFamily, String> {
        let xs = self.yh.add_scaled(self.f, s).map_err(|e| e.to_string())?;
        let inst = build_projection(&xs, self.p, self.frame_seed, self.tol).map_err(|e| e.to_string())?;
        if inst.center_kind != CenterKind::Outer {
            return Err("center lies on X_s".into());
        }
        slice_with_line(&inst, self.q0, self.q1, self.tol).map_err(|e| e.to_string())
    }

    /// Matches the X_s fiber to the Y fiber plus the H-root over `s0`.
    fn match_fibers(&self, x_roots: &[Complex64], y_roots: &[Complex64], s0: Complex64) -> Result<Matching, String> {
        let hcoef = linear_coefficients(self.h);
        let base: Vec<Complex64> = self.q0.iter().zip(self.q1).map(|(a, b)| a + s0 * b).collect();
        let hp = dot(&hcoef, self.p.coords());
        let hb = dot(&hcoef, &base);
        let h_at_infinity = hp.norm() < self.tol.inner_threshold * hb.norm().max(1.0);

        let m = self.d;
        let mut targets = y_roots.to_vec();
        if !h_at_infinity {
            targets.push(-hb / hp);
        }
        let gap = {
            let mut g = f64::INFINITY;
            for (i, a) in targets.iter().enumerate() {
                for b in &targets[i + 1..] {
                    g = g.min((a - b).norm());
                }
            }
            g.min(targets.iter().map(|t| t.norm()).fold(1.0, f64::max))
        };
        let mut map = vec![usize::MAX; m];
        let mut worst: f64 = 0.0;
        if h_at_infinity {
            // The H-root of X_s escapes to infinity as s -> 0.
            let far = (0..m)
                .max_by(|&i, &j| x_roots[i].norm().total_cmp(&x_roots[j].norm()))
                .expect("nonempty fiber");
            let rest: Vec<usize> = (0..m).filter(|&i| i != far).collect();
            let cost: Vec<Vec<f64>> = targets.iter().map(|t| rest.iter().map(|&i| (x_roots[i] - t).norm()).collect()).collect();
            let a = hungarian(&cost);
            for (j, &k) in a.iter().enumerate() {
                map[j] = rest[k];
                worst = worst.max(cost[j][k]);
            }
            map[m - 1] = far;
            let far_gap = targets.iter().map(|t| (x_roots[far] - t).norm()).fold(f64::INFINITY, f64::min);
            if far_gap <= gap {
                return Err("H-root at infinity is not separated from the Y-roots".into());
            }
        } else {
            let cost: Vec<Vec<f64>> = targets.iter().map(|t| x_roots.iter().map(|x| (x - t).norm()).collect()).collect();
            let a = hungarian(&cost);
            for (j, &k) in a.iter().enumerate() {
                map[j] = k;
                worst = worst.max(cost[j][k]);
            }
        }
        let margin = worst / gap;
        if margin > self.tol.matching {
            return Err(format!("fiber matching ambiguous (margin {margin:.3e})"));
        }
        Ok(Matching { map, margin })
    }

    fn row(&self, s_requested: Complex64) -> Result<ContainmentRow, String> {
        let mut s = s_requested;
        let mut halvings = 0;
        loop {
            match self.try_s(s) {
                Ok(Some(mut row)) => {
                    row.s_requested = pair(s_requested);
                    row.halvings = halvings;
                    return Ok(row);
                }
                Ok(None) if halvings < MAX_HALVINGS => {
                    s /= 2.0;
                    halvings += 1;
                }
                Ok(None) => return Err("fiber matching stayed ambiguous after halving s".into()),
                Err(e) => return Err(e),
            }
        }
    }

    /// `Ok(None)` signals an ambiguous matching, to be retried with smaller `s`.
    fn try_s(&self, s: Complex64) -> Result<Option<ContainmentRow>, String> {
        let fam_x = self.family_at(s)?;
        let bps_x = branch_points(&fam_x, self.tol).map_err(|e| e.to_string())?;
        let reach = self
            .bps_y
            .iter()
            .chain(&bps_x.points)
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let s0 = Complex64::from_polar(1.1 * (reach + 1.0), self.base_angle);

        let base_y = FiberState::at(self.fam_y, s0, self.tol).map_err(|e| e.to_string())?;
        let base_x = FiberState::at(&fam_x, s0, self.tol).map_err(|e| e.to_string())?;
        let matching = match self.match_fibers(&base_x.roots, &base_y.roots, s0) {
            Ok(m) => m,
            Err(_) => return Ok(None),
        };

        let m0_gens = self.generators(self.fam_y, self.bps_y, s0)?;
        let ms_gens = self.generators(&fam_x, &bps_x.points, s0)?;
        let ms = PermGroup::generate(self.d, ms_gens.clone()).map_err(|e| e.to_string())?;

        let pi = &matching.map;
        let embedded: Vec<Permutation> = m0_gens
            .iter()
            .map(|g| {
                let mut images = vec![0usize; self.d];
                for j in 0..self.d - 1 {
                    images[pi[j]] = pi[g.apply(j)];
                }
                images[pi[self.d - 1]] = pi[self.d - 1];
                Permutation::new(images).expect("conjugate of a permutation")
            })
            .collect();
        let contained = embedded.iter().all(|g| ms.contains(g));
        let show = |v: &[Permutation]| v.iter().map(|g| g.to_string()).collect::<Vec<_>>();
        Ok(Some(ContainmentRow {
            s_requested: pair(s),
            s_used: pair(s),
            halvings: 0,
            matching_margin: matching.margin,
            label_matching: matching.map.clone(),
            m0_generators: show(&m0_gens),
            ms_order: ms.order().to_string(),
            ms_generators: show(&ms_gens),
            embedded_generators: show(&embedded),
            contained,
        }))
    }

    fn generators(&self, fam: &FiberFamily, points: &[Complex64], s0: Complex64) -> Result<Vec<Permutation>, String> {
        if points.is_empty() {
            return Ok(Vec::new());
        }
        let bps = crate::fibration::BranchPointSet::from_points(points.to_vec());
        let plan = plan_loops_with_basepoint(&bps, s0, self.tol).map_err(|e| e.to_string())?;
        let gens = monodromy_generators(fam, &plan, self.tol, self.opts).map_err(|e| e.to_string())?;
        if !gens.relation_holds {
            return Err("petal relation failed".into());
        }
        Ok(gens.generators)
    }
}

/// Coefficients of a linear form in variable order.
fn linear_coefficients(h: &HomogeneousPoly) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); h.num_vars()];
    for (exps, &c) in h.terms() {
        let i = exps.iter().position(|&e| e == 1).expect("linear monomial");
        out[i] = c;
    }
    out
}

/// A seeded random point of the hyperplane `H`.
pub fn point_on_hyperplane(h: &HomogeneousPoly, seed: u64) -> ComplexPoint {
    let n = h.num_vars();
    let hcoef = linear_coefficients(h);
    let mut r = rng(seed);
    let v: Vec<Complex64> = (0..n).map(|_| complex_gaussian(&mut r)).collect();
    let k = (0..n).max_by(|&a, &b| hcoef[a].norm().total_cmp(&hcoef[b].norm())).expect("n >= 3");
    let mut v = v;
    let rest = dot(&hcoef, &v) - hcoef[k] * v[k];
    v[k] = -rest / hcoef[k];
    ComplexPoint::new(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_and_quartic_containment() {
        let tol = Tolerances::default();
        let opts = TrackOptions::default();
        for (d, seed) in [(3u32, 1u64), (4, 7)] {
            let input = random_degeneration_input(1, d, seed).unwrap();
            let exp = degeneration_experiment(&input, &default_s_values(seed), seed, &tol, &opts).unwrap();
            assert!(exp.all_contained(), "{exp:?}");
            let expected_m0 = if d == 3 { "2" } else { "6" };
            assert_eq!(exp.m0_order, expected_m0);
            for row in &exp.rows {
                let mut sorted = row.label_matching.clone();
                sorted.sort();
                assert_eq!(sorted, (0..d as usize).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn large_s_is_halved() {
        let tol = Tolerances::default();
        let input = random_degeneration_input(1, 3, 2).unwrap();
        let exp =
            degeneration_experiment(&input, &[Complex64::new(0.5, 0.0)], 2, &tol, &TrackOptions::default()).unwrap();
        assert!(exp.rows[0].halvings > 0);
        assert!(exp.all_contained());
    }

    #[test]
    fn center_on_both_components_is_unsupported() {
        let tol = Tolerances::default();
        let mut input = random_degeneration_input(1, 3, 4).unwrap();
        // The conic Y meets the line H in two points; take one.
        let p = point_on_hyperplane(&input.h, 1);
        let dir = point_on_hyperplane(&input.h, 2);
        let line = crate::classifier::instances::restrict_to_line(&input.y, p.coords(), dir.coords());
        let t = crate::poly::roots(&line).unwrap()[0];
        input.center = ComplexPoint::new(p.coords().iter().zip(dir.coords()).map(|(a, b)| a + t * b).collect());
        let err = degeneration_experiment(&input, &default_s_values(4), 4, &tol, &TrackOptions::default());
        assert!(matches!(err, Err(ClassifierError::Unsupported(_))));
    }

    #[test]
    fn center_on_h_only_is_supported() {
        let tol = Tolerances::default();
        let mut input = random_degeneration_input(1, 3, 9).unwrap();
        input.center = point_on_hyperplane(&input.h, 3);
        let exp = degeneration_experiment(&input, &default_s_values(9), 9, &tol, &TrackOptions::default()).unwrap();
        assert!(exp.center_on_h);
        assert!(exp.all_contained());
    }
}
