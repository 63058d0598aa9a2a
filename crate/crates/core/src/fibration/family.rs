use num_complex::Complex64;

use crate::poly::{fiber_at, HomogeneousPoly, UnivariatePoly};
use crate::random::{complex_gaussian, rng};
use crate::tolerances::Tolerances;

use super::projection::{dot, norm2, unit, CenterKind, ProjectionInstance};
use super::FibrationError;

const LINE_ATTEMPTS: usize = 5;

/// The projection restricted to the lines over a line in the target.
///
/// Base point `s` corresponds to `q0 + s q1` in the target frame and the point
/// `q0 + s q1 + t P` of the line through the center is `(s, t)`. Hence
/// `f(s, t) = F(q0 + s q1 + t P) / scale` with `P` at `t = ∞`. For an inner
/// center `F(P) = 0` kills the top coefficient; `q1` is taken tangent to `X` at
/// `P`, which makes the new leading coefficient constant and puts the tangent
/// direction at `s = ∞`.
#[derive(Debug, Clone, PartialEq)]
pub struct FiberFamily {
    /// `c_k(s)` for `k = 0..=fiber_degree`.
    coeffs: Vec<UnivariatePoly>,
    coeff_derivs: Vec<UnivariatePoly>,
    fiber_degree: usize,
    center: Vec<Complex64>,
    q0: Vec<Complex64>,
    q1: Vec<Complex64>,
    scale: f64,
    deflation_residual: Option<f64>,
}

/// Expands `F(q0 + s q1 + t p)` into `B[k][j]`, the coefficient of `t^k s^j`.
pub(crate) fn expand_on_pencil(
    f: &HomogeneousPoly,
    q0: &[Complex64],
    q1: &[Complex64],
    p: &[Complex64],
) -> Vec<Vec<Complex64>> {
    let d = f.degree() as usize;
    let zero = Complex64::new(0.0, 0.0);
    let mul = |a: &Vec<Vec<Complex64>>, b: &Vec<Vec<Complex64>>| {
        let mut out = vec![vec![zero; d + 1]; d + 1];
        for (k1, row1) in a.iter().enumerate() {
            for (j1, &x) in row1.iter().enumerate() {
                if x == zero {
                    continue;
                }
                let used = k1 + j1;
                for (k2, row2) in b.iter().enumerate().take(d + 1 - used) {
                    for (j2, &y) in row2.iter().enumerate().take(d + 1 - used - k2) {
                        out[k1 + k2][j1 + j2] += x * y;
                    }
                }
            }
        }
        out
    };
    let mut one = vec![vec![zero; d + 1]; d + 1];
    one[0][0] = Complex64::new(1.0, 0.0);

    // powers[i][e] = (q0_i + s q1_i + t p_i)^e
    let powers: Vec<Vec<Vec<Vec<Complex64>>>> = (0..f.num_vars())
        .map(|i| {
            let mut lin = vec![vec![zero; d + 1]; d + 1];
            lin[0][0] = q0[i];
            if d >= 1 {
                lin[0][1] = q1[i];
                lin[1][0] = p[i];
            }
            let mut list = vec![one.clone()];
            for e in 1..=d {
                let next = mul(&list[e - 1], &lin);
                list.push(next);
            }
            list
        })
        .collect();

    let mut total = vec![vec![zero; d + 1]; d + 1];
    for (exps, &c) in f.terms() {
        let mut term = one.clone();
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                term = mul(&term, &powers[i][e as usize]);
            }
        }
        for k in 0..=d {
            for j in 0..=d - k {
                total[k][j] += c * term[k][j];
            }
        }
    }
    total
}

fn random_in_span<R: rand::Rng>(r: &mut R, basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let n = basis[0].len();
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    for b in basis {
        let a = complex_gaussian(r);
        for (vi, bi) in v.iter_mut().zip(b) {
            *vi += a * bi;
        }
    }
    v
}

/// Slices the projection over a random line of the target frame.
pub fn slice_to_family(inst: &ProjectionInstance, seed: u64, tol: &Tolerances) -> Result<FiberFamily, FibrationError> {
    let mut r = rng(seed);
    let basis = &inst.frame.basis;
    let grad = match inst.center_kind {
        CenterKind::Inner => Some(inst.surface.eval_gradient(inst.center.coords())?),
        CenterKind::Outer => None,
    };
    let mut last_err = FibrationError::DegenerateFrame;
    for _ in 0..LINE_ATTEMPTS {
        let q0 = unit(&random_in_span(&mut r, basis));
        let q1 = match &grad {
            None => unit(&random_in_span(&mut r, basis)),
            Some(g) => {
                // Tangent direction: u - (g.u / g.w) w lies in the span and kills g.
                let u = random_in_span(&mut r, basis);
                let w = random_in_span(&mut r, basis);
                let gw = dot(g, &w);
                if gw.norm() <= tol.frame_degeneracy * norm2(g) * norm2(&w) {
                    continue;
                }
                let c = dot(g, &u) / gw;
                let v: Vec<Complex64> = u.iter().zip(&w).map(|(ui, wi)| ui - c * wi).collect();
                if norm2(&v) <= tol.frame_degeneracy * norm2(&u) {
                    continue;
                }
                unit(&v)
            }
        };
        match slice_with_line(inst, &q0, &q1, tol) {
            Ok(fam) => return Ok(fam),
            Err(e) => last_err = e,
        }
    }
    Err(last_err)
}

/// Slices over the explicit target line `q0 + s q1`.
pub fn slice_with_line(
    inst: &ProjectionInstance,
    q0: &[Complex64],
    q1: &[Complex64],
    tol: &Tolerances,
) -> Result<FiberFamily, FibrationError> {
    let p = inst.center.coords();
    let n = inst.num_vars();
    if q0.len() != n || q1.len() != n {
        return Err(FibrationError::Poly(crate::poly::PolyError::DimensionMismatch {
            expected: n,
            got: q0.len().min(q1.len()),
        }));
    }
    let d = inst.degree();
    let table = expand_on_pencil(&inst.surface, q0, q1, p);
    let scale = table
        .iter()
        .flatten()
        .map(|c| c.norm())
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(FibrationError::ZeroForm);
    }
    let mut coeffs: Vec<UnivariatePoly> = table
        .iter()
        .map(|row| UnivariatePoly::new_untrimmed(row.iter().map(|c| c / scale).collect()))
        .collect();

    let mut deflation_residual = None;
    if inst.center_kind == CenterKind::Inner {
        let top = coeffs.pop().expect("degree >= 1");
        let residual = top.max_coeff_norm();
        deflation_residual = Some(residual);
        if residual > tol.deflation {
            return Err(FibrationError::DeflationResidual { residual });
        }
        // The new leading coefficient is constant up to rounding; the tangent
        // choice of q1 makes its s-part vanish.
        let lead = coeffs.pop().expect("degree >= 1");
        let drift = lead.coeffs().iter().skip(1).map(|c| c.norm()).fold(0.0, f64::max);
        if drift > tol.deflation {
            return Err(FibrationError::DeflationResidual { residual: drift });
        }
        coeffs.push(UnivariatePoly::constant(lead.coeff(0)));
    }
    let fiber_degree = coeffs.len() - 1;
    debug_assert_eq!(fiber_degree, inst.effective_degree.min(d));
    let lead = coeffs[fiber_degree].clone();
    if lead.degree() != Some(0) || lead.coeff(0).norm() <= tol.frame_degeneracy * tol.frame_degeneracy {
        return Err(FibrationError::LeadingCoefficientVanishes);
    }
    let coeffs: Vec<UnivariatePoly> = coeffs.into_iter().map(|c| UnivariatePoly::new(c.into_coeffs())).collect();
    let coeff_derivs = coeffs.iter().map(|c| c.derivative()).collect();
    Ok(FiberFamily {
        coeffs,
        coeff_derivs,
        fiber_degree,
        center: p.to_vec(),
        q0: q0.to_vec(),
        q1: q1.to_vec(),
        scale,
        deflation_residual,
    })
}

impl FiberFamily {
    /// A family given directly by its coefficient polynomials, with no geometry
    /// behind it. Used for analytic test families such as `t^2 - s`.
    pub fn from_coefficients(coeffs: Vec<UnivariatePoly>) -> Result<Self, FibrationError> {
        if coeffs.len() < 2 {
            return Err(FibrationError::Poly(crate::poly::PolyError::DegreeTooLow));
        }
        let fiber_degree = coeffs.len() - 1;
        if coeffs[fiber_degree].degree() != Some(0) {
            return Err(FibrationError::LeadingCoefficientVanishes);
        }
        let coeff_derivs = coeffs.iter().map(|c| c.derivative()).collect();
        Ok(FiberFamily {
            coeffs,
            coeff_derivs,
            fiber_degree,
            center: Vec::new(),
            q0: Vec::new(),
            q1: Vec::new(),
            scale: 1.0,
            deflation_residual: None,
        })
    }

    pub fn coeffs(&self) -> &[UnivariatePoly] {
        &self.coeffs
    }

    pub fn fiber_degree(&self) -> usize {
        self.fiber_degree
    }

    pub fn deflation_residual(&self) -> Option<f64> {
        self.deflation_residual
    }

    /// The factor `F(pencil_point(s, t))` was divided by.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn line(&self) -> (&[Complex64], &[Complex64]) {
        (&self.q0, &self.q1)
    }

    pub fn fiber(&self, s: Complex64) -> UnivariatePoly {
        fiber_at(&self.coeffs, s)
    }

    /// The target point `q0 + s q1` over which the fiber at `s` lies.
    pub fn base_point(&self, s: Complex64) -> Vec<Complex64> {
        self.q0.iter().zip(&self.q1).map(|(a, b)| a + s * b).collect()
    }

    /// The point of projective space with coordinates `(s, t)`.
    pub fn pencil_point(&self, s: Complex64, t: Complex64) -> Vec<Complex64> {
        self.base_point(s)
            .iter()
            .zip(&self.center)
            .map(|(b, p)| b + t * p)
            .collect()
    }

    /// `(f, ∂f/∂t, ∂f/∂s)` at `(s, t)`.
    pub fn eval_all(&self, s: Complex64, t: Complex64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut f, mut ft, mut fs) = (zero, zero, zero);
        for k in (0..=self.fiber_degree).rev() {
            let c = self.coeffs[k].eval(s);
            let dc = self.coeff_derivs[k].eval(s);
            ft = ft * t + f;
            f = f * t + c;
            fs = fs * t + dc;
        }
        (f, ft, fs)
    }

    /// `(∂f/∂t, ∂²f/∂t², ∂²f/∂t∂s)` at `(s, t)`.
    pub fn eval_second(&self, s: Complex64, t: Complex64) -> (Complex64, Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let (mut f, mut ft, mut half_ftt) = (zero, zero, zero);
        let (mut fs, mut fts) = (zero, zero);
        for k in (0..=self.fiber_degree).rev() {
            let c = self.coeffs[k].eval(s);
            let dc = self.coeff_derivs[k].eval(s);
            half_ftt = half_ftt * t + ft;
            ft = ft * t + f;
            f = f * t + c;
            fts = fts * t + fs;
            fs = fs * t + dc;
        }
        (ft, 2.0 * half_ftt, fts)
    }

    pub fn eval(&self, s: Complex64, t: Complex64) -> Complex64 {
        self.eval_all(s, t).0
    }

    /// Minimum of `|c_m(s)|` over samples of the circle `|s| = radius`.
    pub fn leading_min_on_circle(&self, radius: f64, samples: usize) -> f64 {
        let lead = &self.coeffs[self.fiber_degree];
        (0..samples)
            .map(|j| {
                let s = Complex64::from_polar(radius, std::f64::consts::TAU * j as f64 / samples as f64);
                lead.eval(s).norm()
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::random_general_hypersurface;
    use crate::fibration::build_projection;
    use crate::poly::ComplexPoint;
    use crate::random::gaussian_vector;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn fermat_cubic_over_coordinate_line() {
        let f = HomogeneousPoly::fermat(3, 3).unwrap();
        let p = ComplexPoint::from_real(&[0.0, 0.0, 1.0]);
        let tol = Tolerances::default();
        let inst = build_projection(&f, &p, 1, &tol).unwrap();
        // base line x = 1 + 2s, y = -0.5 + s, z = 0
        let q0 = vec![c(1.0), c(-0.5), c(0.0)];
        let q1 = vec![c(2.0), c(1.0), c(0.0)];
        let fam = slice_with_line(&inst, &q0, &q1, &tol).unwrap();
        assert_eq!(fam.fiber_degree(), 3);
        assert!(fam.coeffs()[1].is_zero());
        assert!(fam.coeffs()[2].is_zero());
        // Independent substitution: x(s)^3 + y(s)^3 = (1+2s)^3 + (s-1/2)^3.
        let x3 = UnivariatePoly::from_real(&[1.0, 6.0, 12.0, 8.0]);
        let y3 = UnivariatePoly::from_real(&[-0.125, 0.75, -1.5, 1.0]);
        let expected = x3.add(&y3).scale(c(1.0 / fam.scale()));
        let got = &fam.coeffs()[0];
        for k in 0..4 {
            assert!((got.coeff(k) - expected.coeff(k)).norm() < 1e-14);
        }
        assert!((fam.coeffs()[3].coeff(0) - c(1.0 / fam.scale())).norm() < 1e-14);
    }

    #[test]
    fn pencil_consistency() {
        let tol = Tolerances::default();
        for (n, d, seed) in [(1, 4, 1u64), (2, 3, 2), (1, 5, 3)] {
            let f = random_general_hypersurface(n, d, seed).unwrap();
            let p = ComplexPoint::new(gaussian_vector(&mut rng(seed + 10), n + 2));
            let inst = build_projection(&f, &p, seed, &tol).unwrap();
            let fam = slice_to_family(&inst, seed, &tol).unwrap();
            let mut r = rng(99);
            for _ in 0..50 {
                let s = complex_gaussian(&mut r) * 2.0;
                let t = complex_gaussian(&mut r) * 2.0;
                let direct = inst.surface.eval(&fam.pencil_point(s, t)).unwrap() / fam.scale();
                let via = fam.eval(s, t);
                assert!((direct - via).norm() <= 1e-9 * direct.norm().max(1.0));
            }
        }
    }

    #[test]
    fn inner_cubic_deflates_to_degree_two() {
        let f = HomogeneousPoly::fermat(3, 3).unwrap();
        let p = ComplexPoint::from_real(&[1.0, -1.0, 0.0]);
        let tol = Tolerances::default();
        let inst = build_projection(&f, &p, 4, &tol).unwrap();
        let fam = slice_to_family(&inst, 4, &tol).unwrap();
        assert_eq!(fam.fiber_degree(), 2);
        assert!(fam.deflation_residual().unwrap() < 1e-9);
        assert_eq!(fam.coeffs()[2].degree(), Some(0));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let f = random_general_hypersurface(1, 4, 8).unwrap();
        let p = ComplexPoint::new(gaussian_vector(&mut rng(5), 3));
        let tol = Tolerances::default();
        let inst = build_projection(&f, &p, 2, &tol).unwrap();
        let fam = slice_to_family(&inst, 2, &tol).unwrap();
        let (s, t) = (Complex64::new(0.3, -0.2), Complex64::new(-0.7, 0.4));
        let h = 1e-6;
        let (_, ft, fs) = fam.eval_all(s, t);
        let ft_fd = (fam.eval(s, t + h) - fam.eval(s, t - h)) / (2.0 * h);
        let fs_fd = (fam.eval(s + h, t) - fam.eval(s - h, t)) / (2.0 * h);
        assert!((ft - ft_fd).norm() < 1e-7);
        assert!((fs - fs_fd).norm() < 1e-7);
    }
}
