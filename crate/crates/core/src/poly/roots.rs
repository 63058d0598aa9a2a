//! Simultaneous root finding by Aberth–Ehrlich iteration with Newton polishing.

use std::cmp::Ordering;
use std::f64::consts::PI;

use num_complex::Complex64;

use super::univariate::{UnivariatePoly, ZERO_THRESHOLD};
use super::PolyError;

/// Residual bound `|p(r)| / (1 + |r|)^deg` for the normalized polynomial.
pub const ROOT_RESIDUAL_TOLERANCE: f64 = 1e-10;

const MAX_ITERATIONS: usize = 800;
const POLISH_STEPS: usize = 3;

/// All complex roots of `p` counted with multiplicity, sorted by (re, im).
pub fn roots(p: &UnivariatePoly) -> Result<Vec<Complex64>, PolyError> {
    roots_with_tolerance(p, ROOT_RESIDUAL_TOLERANCE)
}

pub fn roots_with_tolerance(p: &UnivariatePoly, tolerance: f64) -> Result<Vec<Complex64>, PolyError> {
    let p = p.trimmed(ZERO_THRESHOLD).normalized();
    let degree = match p.degree() {
        None | Some(0) => return Err(PolyError::DegreeTooLow),
        Some(d) => d,
    };

    // Exact zero roots are split off so that the iteration sees a nonzero constant term.
    let zeros = p.coeffs().iter().take_while(|c| c.norm() == 0.0).count();
    let reduced = UnivariatePoly::new_untrimmed(p.coeffs()[zeros..].to_vec());
    let mut found = vec![Complex64::new(0.0, 0.0); zeros];
    if reduced.degree().unwrap_or(0) > 0 {
        found.extend(aberth(&reduced)?);
    }

    for r in found.iter_mut() {
        polish(&p, r);
    }
    for r in &found {
        let residual = p.eval(*r).norm() / (1.0 + r.norm()).powi(degree as i32);
        if !residual.is_finite() || residual > tolerance {
            return Err(PolyError::NoConvergence { residual });
        }
    }
    found.sort_by(cmp_complex);
    Ok(found)
}

/// Total order by real part, then imaginary part.
pub fn cmp_complex(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn aberth(p: &UnivariatePoly) -> Result<Vec<Complex64>, PolyError> {
    let n = p.degree().unwrap_or(0);
    let coeffs = p.coeffs();
    let lead = coeffs[n].norm();
    let radius = (coeffs[0].norm() / lead).powf(1.0 / n as f64).max(f64::MIN_POSITIVE);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / n as f64 + 0.4))
        .collect();

    let mut converged = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (v, dv) = p.eval_with_derivative(z[k]);
            if v.norm() == 0.0 {
                converged[k] = true;
                continue;
            }
            let ratio = v / dv;
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != k)
                .map(|j| (z[k] - z[j]).inv())
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
            } else {
                // dv vanished; nudge off the critical point
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                z[k] += bump;
                continue;
            }
            if step.norm() <= 4.0 * f64::EPSILON * (1.0 + z[k].norm()) {
                converged[k] = true;
            } else {
                let scale = p.abs_eval(z[k]);
                let value = p.eval(z[k]).norm();
                if value <= 8.0 * f64::EPSILON * scale {
                    converged[k] = true;
                }
            }
        }
        if converged.iter().all(|&c| c) {
            return Ok(z);
        }
    }
    // Not every estimate settled; the caller's residual check decides.
    Ok(z)
}

fn polish(p: &UnivariatePoly, r: &mut Complex64) {
    let mut best = p.eval(*r).norm();
    for _ in 0..POLISH_STEPS {
        let (v, dv) = p.eval_with_derivative(*r);
        if dv.norm() == 0.0 {
            return;
        }
        let candidate = *r - v / dv;
        let value = p.eval(candidate).norm();
        if value < best {
            best = value;
            *r = candidate;
        } else {
            return;
        }
    }
}
