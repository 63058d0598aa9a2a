use serde::Serialize;

use crate::tolerances::Tolerances;

use super::branch::{too_close, BranchPointSet};
use super::family::FiberFamily;

/// Numerical stand-in for "general": the quantities that must stay away from
/// their degenerate values, and the resulting verdict.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GenericityReport {
    /// Minimum of `|c_m(s)|` on the working circle.
    pub leading_min: f64,
    /// Radius of the working circle, 1.5 times the largest branch point modulus.
    pub working_radius: f64,
    pub simple_flags: Vec<bool>,
    pub non_simple_count: usize,
    pub min_separation: f64,
    pub deflation_residual: Option<f64>,
    pub generic: bool,
    pub reasons: Vec<String>,
}

pub fn genericity_report(fam: &FiberFamily, bps: &BranchPointSet, tol: &Tolerances) -> GenericityReport {
    let working_radius = 1.5 * bps.max_modulus().max(1.0);
    let leading_min = fam.leading_min_on_circle(working_radius, 64);
    let non_simple_count = bps.simple_flags.iter().filter(|&&f| !f).count();
    let mut reasons = Vec::new();
    if leading_min <= tol.zero_threshold {
        reasons.push(format!("leading coefficient nearly vanishes ({leading_min:e})"));
    }
    if non_simple_count > 0 {
        reasons.push(format!("{non_simple_count} non-simple discriminant zero(s)"));
    }
    let crowded = bps
        .points
        .iter()
        .enumerate()
        .any(|(i, &a)| bps.points[i + 1..].iter().any(|&b| too_close(a, b, tol)));
    if crowded {
        reasons.push(format!("branch points {:e} apart", bps.min_separation));
    }
    if let Some(r) = fam.deflation_residual() {
        if r > tol.deflation {
            reasons.push(format!("deflation residual {r:e}"));
        }
    }
    GenericityReport {
        leading_min,
        working_radius,
        simple_flags: bps.simple_flags.clone(),
        non_simple_count,
        min_separation: bps.min_separation,
        deflation_residual: fam.deflation_residual(),
        generic: reasons.is_empty(),
        reasons,
    }
}
