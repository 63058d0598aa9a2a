use num_complex::Complex64;
use rand::Rng;

use crate::fibration::expand_on_pencil;
use crate::poly::{monomials, roots, ComplexPoint, HomogeneousPoly, UnivariatePoly};
use crate::random::{complex_gaussian, derive_seed, gaussian_vector, rng};
use crate::tolerances::Tolerances;

use super::ClassifierError;

const RESAMPLES: u64 = 5;
const SPOT_CHECK_LINES: usize = 20;
/// Relative gradient size below which a sampled point of X counts as singular.
const SMOOTHNESS_FLOOR: f64 = 1e-6;

const TAG_SURFACE: u64 = 0x5f;
const TAG_INNER: u64 = 0x1e;
const TAG_SPOT: u64 = 0x5c;

/// `F` restricted to the line `a + t b`, as a polynomial in `t`.
pub(crate) fn restrict_to_line(f: &HomogeneousPoly, a: &[Complex64], b: &[Complex64]) -> UnivariatePoly {
    let zero = vec![Complex64::new(0.0, 0.0); a.len()];
    let table = expand_on_pencil(f, a, &zero, b);
    UnivariatePoly::new(table.iter().map(|row| row[0]).collect())
}

/// Numerical smoothness spot check: every intersection of `X` with 20 random
/// lines has a gradient well away from zero.
pub fn smoothness_spot_check(f: &HomogeneousPoly, seed: u64) -> bool {
    let f = f.unit_scaled();
    let n = f.num_vars();
    let d = f.degree() as i32;
    let mut r = rng(derive_seed(seed, TAG_SPOT, 0));
    for _ in 0..SPOT_CHECK_LINES {
        let a = gaussian_vector(&mut r, n);
        let b = gaussian_vector(&mut r, n);
        let Ok(ts) = roots(&restrict_to_line(&f, &a, &b)) else {
            return false;
        };
        for t in ts {
            let x = ComplexPoint::new(a.iter().zip(&b).map(|(ai, bi)| ai + t * bi).collect());
            let x = x.normalized().expect("nonzero point");
            let grad = f.eval_gradient(x.coords()).expect("dimension matches");
            let g = grad.iter().map(|c| c.norm()).fold(0.0, f64::max);
            if g < SMOOTHNESS_FLOOR * d as f64 {
                return false;
            }
        }
    }
    true
}

/// A degree-`d` form in `n + 2` variables with independent complex Gaussian
/// coefficients on every monomial, resampled if the smoothness spot check fails.
pub fn random_general_hypersurface(n: usize, d: u32, seed: u64) -> Result<HomogeneousPoly, ClassifierError> {
    if n < 1 || d < 1 {
        return Err(ClassifierError::Input(format!("need n >= 1 and d >= 1, got n = {n}, d = {d}")));
    }
    for attempt in 0..RESAMPLES {
        let mut r = rng(derive_seed(seed, TAG_SURFACE, attempt));
        let terms: Vec<_> = monomials(n + 2, d).into_iter().map(|m| (m, complex_gaussian(&mut r))).collect();
        let f = HomogeneousPoly::new(n + 2, d, terms).map_err(|e| ClassifierError::Input(e.to_string()))?;
        if smoothness_spot_check(&f, seed) {
            return Ok(f);
        }
    }
    Err(ClassifierError::Degenerate(format!(
        "no hypersurface passed the smoothness spot check after {RESAMPLES} samples"
    )))
}

/// A complex Gaussian point, kept clearly off `X`.
pub fn random_outer_center(f: &HomogeneousPoly, seed: u64, tol: &Tolerances) -> ComplexPoint {
    let g = f.unit_scaled();
    let mut r = rng(seed);
    loop {
        let p = ComplexPoint::new(gaussian_vector(&mut r, f.num_vars()))
            .normalized()
            .expect("a Gaussian vector is nonzero");
        if g.eval(p.coords()).expect("dimension matches").norm() >= tol.ambiguous_threshold * 10.0 {
            return p;
        }
    }
}

/// A point of `X`: one of the intersections of `X` with a random line.
pub fn random_inner_center(f: &HomogeneousPoly, seed: u64) -> Result<ComplexPoint, ClassifierError> {
    let tol = Tolerances::default();
    let g = f.unit_scaled();
    let n = f.num_vars();
    for attempt in 0..RESAMPLES {
        let mut r = rng(derive_seed(seed, TAG_INNER, attempt));
        let a = gaussian_vector(&mut r, n);
        let b = gaussian_vector(&mut r, n);
        let line = restrict_to_line(&g, &a, &b);
        let Ok(ts) = roots(&line) else { continue };
        let t = ts[r.random_range(0..ts.len())];
        let p = ComplexPoint::new(a.iter().zip(&b).map(|(ai, bi)| ai + t * bi).collect())
            .normalized()
            .expect("nonzero point");
        if g.eval(p.coords()).expect("dimension matches").norm() < tol.inner_threshold * 1e-2 {
            return Ok(p);
        }
    }
    Err(ClassifierError::Degenerate("could not sample a point on the hypersurface".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binomial(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn coefficient_count_and_determinism() {
        for (n, d) in [(1usize, 3u32), (2, 4), (1, 5), (2, 2)] {
            let f = random_general_hypersurface(n, d, 11).unwrap();
            assert_eq!(f.terms().len(), binomial(d as usize + n + 1, n + 1));
            assert_eq!(f, random_general_hypersurface(n, d, 11).unwrap());
        }
        assert_ne!(
            random_general_hypersurface(1, 3, 1).unwrap(),
            random_general_hypersurface(1, 3, 2).unwrap()
        );
    }

    #[test]
    fn spot_check_detects_singular_curves() {
        assert!(smoothness_spot_check(&random_general_hypersurface(1, 3, 5).unwrap(), 1));
        // The double line (x + y)^2 is singular everywhere.
        let double_line = HomogeneousPoly::from_real_terms(3, 2, &[(&[2, 0, 0], 1.0), (&[1, 1, 0], 2.0), (&[0, 2, 0], 1.0)])
            .unwrap();
        assert!(!smoothness_spot_check(&double_line, 1));
    }

    #[test]
    fn inner_centers_lie_on_the_surface() {
        for seed in 0..5 {
            let f = random_general_hypersurface(2, 4, seed).unwrap();
            let p = random_inner_center(&f, seed).unwrap();
            assert!(f.unit_scaled().eval(p.coords()).unwrap().norm() < 1e-9);
            let q = random_outer_center(&f, seed, &Tolerances::default());
            assert!(f.unit_scaled().eval(q.coords()).unwrap().norm() > 1e-6);
        }
    }
}
