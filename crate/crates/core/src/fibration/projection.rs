use num_complex::Complex64;
use serde::Serialize;

use crate::poly::{ComplexPoint, HomogeneousPoly};
use crate::random::{gaussian_vector, rng};
use crate::tolerances::Tolerances;

use super::FibrationError;

const FRAME_ATTEMPTS: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CenterKind {
    /// The center lies on the hypersurface; the projection has degree d - 1.
    Inner,
    /// The center lies off the hypersurface; the projection has degree d.
    Outer,
}

/// A hyperplane not through the center together with a basis of it.
///
/// Points of the hyperplane parametrize the lines through the center, i.e. the
/// target of the projection.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetFrame {
    pub hyperplane: Vec<Complex64>,
    pub basis: Vec<Vec<Complex64>>,
}

/// A hypersurface with a chosen center of projection.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectionInstance {
    /// The form, scaled to unit max coefficient.
    pub surface: HomogeneousPoly,
    /// The center, max-norm normalized.
    pub center: ComplexPoint,
    pub center_kind: CenterKind,
    /// `|F(P)|` after normalization.
    pub center_value: f64,
    pub frame: TargetFrame,
    pub effective_degree: usize,
}

pub(crate) fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub(crate) fn unit(a: &[Complex64]) -> Vec<Complex64> {
    let n = norm2(a);
    a.iter().map(|x| x / n).collect()
}

/// Classifies the center and samples a target frame.
pub fn build_projection(
    surface: &HomogeneousPoly,
    center: &ComplexPoint,
    seed: u64,
    tol: &Tolerances,
) -> Result<ProjectionInstance, FibrationError> {
    if surface.is_zero() {
        return Err(FibrationError::ZeroForm);
    }
    if center.dim() != surface.num_vars() {
        return Err(FibrationError::Poly(crate::poly::PolyError::DimensionMismatch {
            expected: surface.num_vars(),
            got: center.dim(),
        }));
    }
    let p = center.normalized().ok_or(FibrationError::ZeroCenter)?;
    let f = surface.unit_scaled();
    let value = f.eval(p.coords())?.norm();
    let kind = if value < tol.inner_threshold {
        CenterKind::Inner
    } else if value < tol.ambiguous_threshold {
        return Err(FibrationError::AmbiguousCenter { value });
    } else {
        CenterKind::Outer
    };
    if kind == CenterKind::Inner {
        let grad = f.eval_gradient(p.coords())?;
        let gmax = grad.iter().map(|g| g.norm()).fold(0.0, f64::max);
        if gmax < tol.singular_threshold {
            return Err(FibrationError::SingularCenter { gradient: gmax });
        }
    }
    let d = f.degree() as usize;
    let effective_degree = match kind {
        CenterKind::Inner => d - 1,
        CenterKind::Outer => d,
    };

    let frame = sample_frame(p.coords(), seed, tol)?;
    Ok(ProjectionInstance {
        surface: f,
        center: p,
        center_kind: kind,
        center_value: value,
        frame,
        effective_degree,
    })
}

fn sample_frame(center: &[Complex64], seed: u64, tol: &Tolerances) -> Result<TargetFrame, FibrationError> {
    let n = center.len();
    let mut r = rng(seed);
    let pnorm = norm2(center);
    for _ in 0..FRAME_ATTEMPTS {
        let h = gaussian_vector(&mut r, n);
        let hp = dot(&h, center);
        if hp.norm() / (norm2(&h) * pnorm) <= tol.frame_degeneracy {
            continue;
        }
        // Projecting from P onto {h = 0}: v - (h(v) / h(P)) P.
        let basis: Vec<Vec<Complex64>> = (0..n - 1)
            .map(|_| {
                let v = gaussian_vector(&mut r, n);
                let c = dot(&h, &v) / hp;
                unit(&v.iter().zip(center).map(|(vi, pi)| vi - c * pi).collect::<Vec<_>>())
            })
            .collect();
        return Ok(TargetFrame { hyperplane: h, basis });
    }
    Err(FibrationError::DegenerateFrame)
}

impl ProjectionInstance {
    pub fn num_vars(&self) -> usize {
        self.surface.num_vars()
    }

    /// Dimension n of the hypersurface (so it lives in P^{n+1}).
    pub fn dimension(&self) -> usize {
        self.num_vars() - 2
    }

    pub fn degree(&self) -> usize {
        self.surface.degree() as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::random_general_hypersurface;

    #[test]
    fn fermat_cubic_centers() {
        let f = HomogeneousPoly::fermat(3, 3).unwrap();
        let tol = Tolerances::default();
        let outer = build_projection(&f, &ComplexPoint::from_real(&[0.0, 0.0, 1.0]), 1, &tol).unwrap();
        assert_eq!(outer.center_kind, CenterKind::Outer);
        assert_eq!(outer.effective_degree, 3);
        let inner = build_projection(&f, &ComplexPoint::from_real(&[1.0, -1.0, 0.0]), 1, &tol).unwrap();
        assert_eq!(inner.center_kind, CenterKind::Inner);
        assert_eq!(inner.effective_degree, 2);
    }

    #[test]
    fn frame_lies_in_hyperplane_away_from_center() {
        let f = HomogeneousPoly::fermat(4, 4).unwrap();
        let p = ComplexPoint::from_real(&[0.3, -1.0, 0.2, 0.5]);
        let inst = build_projection(&f, &p, 9, &Tolerances::default()).unwrap();
        assert_eq!(inst.frame.basis.len(), 3);
        for b in &inst.frame.basis {
            assert!(dot(&inst.frame.hyperplane, b).norm() < 1e-12);
        }
        assert!(dot(&inst.frame.hyperplane, inst.center.coords()).norm() > 1e-3);
    }

    #[test]
    fn random_quartic_surface_outer() {
        let f = random_general_hypersurface(2, 4, 5).unwrap();
        let p = ComplexPoint::new(gaussian_vector(&mut rng(77), 4));
        let inst = build_projection(&f, &p, 3, &Tolerances::default()).unwrap();
        assert!(f.unit_scaled().eval(inst.center.coords()).unwrap().norm() > 1e-6);
        assert_eq!(inst.center_kind, CenterKind::Outer);
        assert_eq!(inst.effective_degree, 4);
    }

    #[test]
    fn singular_and_ambiguous_centers() {
        // x0*x1*x2 is singular at the coordinate vertices
        let f = HomogeneousPoly::from_real_terms(3, 3, &[(&[1, 1, 1], 1.0)]).unwrap();
        let err = build_projection(&f, &ComplexPoint::from_real(&[1.0, 0.0, 0.0]), 1, &Tolerances::default());
        assert!(matches!(err, Err(FibrationError::SingularCenter { .. })));

        let g = HomogeneousPoly::fermat(3, 2).unwrap();
        let near = ComplexPoint::new(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0 + 1e-7),
        ]);
        let err = build_projection(&g, &near, 1, &Tolerances::default());
        assert!(matches!(err, Err(FibrationError::AmbiguousCenter { .. })));
    }
}
