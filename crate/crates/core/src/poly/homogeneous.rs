use std::collections::BTreeMap;

use num_complex::Complex64;

use super::PolyError;

/// Exponent vector of a monomial, one entry per variable.
pub type Exponents = Vec<u32>;

/// A form of fixed degree in `num_vars` variables with complex coefficients.
///
/// Terms are kept in a `BTreeMap`, so every traversal (evaluation, printing,
/// serialization) runs in lexicographic order of exponent vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct HomogeneousPoly {
    num_vars: usize,
    degree: u32,
    terms: BTreeMap<Exponents, Complex64>,
}

impl HomogeneousPoly {
    /// Builds a form from `(exponents, coefficient)` pairs, merging repeated monomials
    /// and dropping exact zeros.
    pub fn new<I>(num_vars: usize, degree: u32, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Exponents, Complex64)>,
    {
        if num_vars < 3 {
            return Err(PolyError::TooFewVariables(num_vars));
        }
        let mut map: BTreeMap<Exponents, Complex64> = BTreeMap::new();
        for (exps, coeff) in terms {
            if exps.len() != num_vars {
                return Err(PolyError::DimensionMismatch {
                    expected: num_vars,
                    got: exps.len(),
                });
            }
            let total: u32 = exps.iter().sum();
            if total != degree {
                return Err(PolyError::NotHomogeneous {
                    expected: degree,
                    got: total,
                });
            }
            *map.entry(exps).or_default() += coeff;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(HomogeneousPoly {
            num_vars,
            degree,
            terms: map,
        })
    }

    /// Convenience constructor for real coefficients.
    pub fn from_real_terms(num_vars: usize, degree: u32, terms: &[(&[u32], f64)]) -> Result<Self, PolyError> {
        Self::new(
            num_vars,
            degree,
            terms.iter().map(|(e, c)| (e.to_vec(), Complex64::new(*c, 0.0))),
        )
    }

    /// The linear form `sum h_i x_i`.
    pub fn linear(coeffs: &[Complex64]) -> Result<Self, PolyError> {
        let n = coeffs.len();
        Self::new(
            n,
            1,
            coeffs.iter().enumerate().map(|(i, &c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (e, c)
            }),
        )
    }

    /// `x_0^d + ... + x_{n-1}^d`.
    pub fn fermat(num_vars: usize, degree: u32) -> Result<Self, PolyError> {
        Self::new(
            num_vars,
            degree,
            (0..num_vars).map(|i| {
                let mut e = vec![0; num_vars];
                e[i] = degree;
                (e, Complex64::new(1.0, 0.0))
            }),
        )
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Complex64> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Copy scaled so that the largest coefficient has modulus 1.
    pub fn unit_scaled(&self) -> Self {
        let m = self.max_coeff_norm();
        if m == 0.0 {
            return self.clone();
        }
        HomogeneousPoly {
            num_vars: self.num_vars,
            degree: self.degree,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c / m)).collect(),
        }
    }

    pub fn eval(&self, x: &[Complex64]) -> Result<Complex64, PolyError> {
        if x.len() != self.num_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        let powers = power_table(x, self.degree);
        let mut acc = Complex64::new(0.0, 0.0);
        for (exps, coeff) in &self.terms {
            let mut m = *coeff;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    m *= powers[i][e as usize];
                }
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Partial derivatives `∂F/∂x_i`, each of degree `d - 1`.
    pub fn gradient(&self) -> Vec<HomogeneousPoly> {
        (0..self.num_vars).map(|i| self.partial(i)).collect()
    }

    pub fn partial(&self, var: usize) -> HomogeneousPoly {
        let mut terms = BTreeMap::new();
        for (exps, coeff) in &self.terms {
            let e = exps[var];
            if e == 0 {
                continue;
            }
            let mut lowered = exps.clone();
            lowered[var] -= 1;
            *terms.entry(lowered).or_default() += coeff * e as f64;
        }
        HomogeneousPoly {
            num_vars: self.num_vars,
            degree: self.degree.saturating_sub(1),
            terms,
        }
    }

    /// Gradient evaluated at a point, without materializing the derivative forms.
    pub fn eval_gradient(&self, x: &[Complex64]) -> Result<Vec<Complex64>, PolyError> {
        if x.len() != self.num_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.num_vars,
                got: x.len(),
            });
        }
        let powers = power_table(x, self.degree);
        let mut grad = vec![Complex64::new(0.0, 0.0); self.num_vars];
        for (exps, coeff) in &self.terms {
            for (var, g) in grad.iter_mut().enumerate() {
                let e = exps[var];
                if e == 0 {
                    continue;
                }
                let mut m = coeff * e as f64;
                for (i, &ei) in exps.iter().enumerate() {
                    let p = if i == var { ei - 1 } else { ei };
                    if p > 0 {
                        m *= powers[i][p as usize];
                    }
                }
                *g += m;
            }
        }
        Ok(grad)
    }

    /// Product of two forms in the same variables.
    pub fn mul(&self, other: &HomogeneousPoly) -> Result<HomogeneousPoly, PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.num_vars,
                got: other.num_vars,
            });
        }
        let mut terms: BTreeMap<Exponents, Complex64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *terms.entry(e).or_default() += ca * cb;
            }
        }
        terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(HomogeneousPoly {
            num_vars: self.num_vars,
            degree: self.degree + other.degree,
            terms,
        })
    }

    /// `self + factor * other`, both of the same degree.
    pub fn add_scaled(&self, other: &HomogeneousPoly, factor: Complex64) -> Result<HomogeneousPoly, PolyError> {
        if self.num_vars != other.num_vars {
            return Err(PolyError::DimensionMismatch {
                expected: self.num_vars,
                got: other.num_vars,
            });
        }
        if self.degree != other.degree {
            return Err(PolyError::NotHomogeneous {
                expected: self.degree,
                got: other.degree,
            });
        }
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            *terms.entry(e.clone()).or_default() += c * factor;
        }
        terms.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Ok(HomogeneousPoly {
            num_vars: self.num_vars,
            degree: self.degree,
            terms,
        })
    }
}

fn power_table(x: &[Complex64], degree: u32) -> Vec<Vec<Complex64>> {
    x.iter()
        .map(|&xi| {
            let mut row = Vec::with_capacity(degree as usize + 1);
            let mut p = Complex64::new(1.0, 0.0);
            row.push(p);
            for _ in 0..degree {
                p *= xi;
                row.push(p);
            }
            row
        })
        .collect()
}

/// All exponent vectors of total degree `degree` in `num_vars` variables,
/// in descending lexicographic order.
pub fn monomials(num_vars: usize, degree: u32) -> Vec<Exponents> {
    fn rec(prefix: &mut Exponents, remaining: u32, slots: usize, out: &mut Vec<Exponents>) {
        if slots == 1 {
            prefix.push(remaining);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=remaining).rev() {
            prefix.push(e);
            rec(prefix, remaining - e, slots - 1, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if num_vars > 0 {
        rec(&mut Vec::with_capacity(num_vars), degree, num_vars, &mut out);
    }
    out
}

/// A point of complex projective (or affine) space given by its coordinates.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexPoint {
    coords: Vec<Complex64>,
}

impl ComplexPoint {
    pub fn new(coords: Vec<Complex64>) -> Self {
        ComplexPoint { coords }
    }

    pub fn from_real(coords: &[f64]) -> Self {
        ComplexPoint {
            coords: coords.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        }
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn max_norm(&self) -> f64 {
        self.coords.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Rescales so that the coordinate of largest modulus becomes exactly 1.
    ///
    /// Returns `None` for the zero vector, which is not a projective point.
    pub fn normalized(&self) -> Option<ComplexPoint> {
        let (idx, m) = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, c)| (i, c.norm()))
            .fold((0, 0.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if m == 0.0 {
            return None;
        }
        let pivot = self.coords[idx];
        let mut coords: Vec<Complex64> = self.coords.iter().map(|c| c / pivot).collect();
        coords[idx] = Complex64::new(1.0, 0.0);
        Some(ComplexPoint { coords })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_form(rng: &mut ChaCha8Rng, num_vars: usize, degree: u32) -> HomogeneousPoly {
        let terms: Vec<_> = monomials(num_vars, degree)
            .into_iter()
            .map(|e| (e, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))))
            .collect();
        HomogeneousPoly::new(num_vars, degree, terms).unwrap()
    }

    fn naive_eval(f: &HomogeneousPoly, x: &[Complex64]) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for (e, coeff) in f.terms() {
            let mut term = *coeff;
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    term *= x[i];
                }
            }
            acc += term;
        }
        acc
    }

    #[test]
    fn conic_vanishes_at_isotropic_point() {
        let f = HomogeneousPoly::fermat(3, 2).unwrap();
        let v = f.eval(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert!(v.norm() < 1e-15);
    }

    #[test]
    fn fermat_cubic_at_vertex() {
        let f = HomogeneousPoly::fermat(3, 3).unwrap();
        let v = f.eval(&[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert_eq!(v, c(1.0, 0.0));
    }

    #[test]
    fn matches_naive_evaluator() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = random_form(&mut rng, 4, 4);
        for _ in 0..20 {
            let x: Vec<_> = (0..4).map(|_| c(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0))).collect();
            let a = f.eval(&x).unwrap();
            let b = naive_eval(&f, &x);
            assert!((a - b).norm() <= 1e-12 * (1.0 + b.norm()));
        }
    }

    #[test]
    fn gradient_of_fermat_forms() {
        let g = HomogeneousPoly::fermat(3, 2).unwrap().gradient();
        for (i, gi) in g.iter().enumerate() {
            let mut e = vec![0; 3];
            e[i] = 1;
            assert_eq!(gi.terms().len(), 1);
            assert_eq!(gi.terms()[&e], c(2.0, 0.0));
        }
        let g = HomogeneousPoly::fermat(3, 3).unwrap().gradient();
        for (i, gi) in g.iter().enumerate() {
            let mut e = vec![0; 3];
            e[i] = 2;
            assert_eq!(gi.degree(), 2);
            assert_eq!(gi.terms()[&e], c(3.0, 0.0));
        }
    }

    #[test]
    fn euler_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for degree in 1..=6 {
            let f = random_form(&mut rng, 4, degree);
            let grad = f.gradient();
            for _ in 0..20 {
                let x: Vec<_> = (0..4).map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
                let lhs: Complex64 = grad.iter().zip(&x).map(|(g, xi)| g.eval(&x).unwrap() * xi).sum();
                let rhs = f.eval(&x).unwrap() * degree as f64;
                assert!((lhs - rhs).norm() <= 1e-10 * rhs.norm().max(1e-3));
                let direct: Complex64 = f.eval_gradient(&x).unwrap().iter().zip(&x).map(|(g, xi)| g * xi).sum();
                assert!((direct - rhs).norm() <= 1e-10 * rhs.norm().max(1e-3));
            }
        }
    }

    #[test]
    fn rejects_inhomogeneous_terms_and_bad_points() {
        let err = HomogeneousPoly::from_real_terms(3, 2, &[(&[2, 0, 0], 1.0), (&[1, 0, 0], 1.0)]);
        assert!(matches!(err, Err(PolyError::NotHomogeneous { .. })));
        assert!(matches!(HomogeneousPoly::fermat(2, 2), Err(PolyError::TooFewVariables(2))));
        let f = HomogeneousPoly::fermat(3, 2).unwrap();
        assert!(matches!(f.eval(&[c(1.0, 0.0)]), Err(PolyError::DimensionMismatch { .. })));
    }

    #[test]
    fn monomial_count_is_binomial() {
        assert_eq!(monomials(3, 3).len(), 10);
        assert_eq!(monomials(4, 4).len(), 35);
        assert_eq!(monomials(3, 5).len(), 21);
        for e in monomials(4, 3) {
            assert_eq!(e.iter().sum::<u32>(), 3);
        }
    }

    #[test]
    fn products_stay_homogeneous() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = random_form(&mut rng, 3, 2);
        let b = random_form(&mut rng, 3, 3);
        let p = a.mul(&b).unwrap();
        assert_eq!(p.degree(), 5);
        assert!(p.terms().keys().all(|e| e.iter().sum::<u32>() == 5));
        let x = [c(0.3, 0.1), c(-1.0, 0.4), c(0.5, 0.5)];
        let expected = a.eval(&x).unwrap() * b.eval(&x).unwrap();
        assert!((p.eval(&x).unwrap() - expected).norm() < 1e-12);
    }

    #[test]
    fn point_normalization() {
        let p = ComplexPoint::new(vec![c(0.0, 2.0), c(1.0, 0.0), c(0.0, 0.0)]).normalized().unwrap();
        assert_eq!(p.coords()[0], c(1.0, 0.0));
        assert!((p.coords()[1] - c(0.0, -0.5)).norm() < 1e-16);
        assert!(ComplexPoint::from_real(&[0.0, 0.0, 0.0]).normalized().is_none());
    }
}
