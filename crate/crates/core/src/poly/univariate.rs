use std::fmt;

use num_complex::Complex64;

/// Relative threshold below which a coefficient counts as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

/// Dense univariate polynomial with complex coefficients in ascending degree order.
///
/// The coefficient vector is kept trimmed: the last stored coefficient has modulus
/// above `ZERO_THRESHOLD` times the largest coefficient modulus. The zero polynomial
/// is stored as an empty vector.
#[derive(Clone, Debug, PartialEq)]
pub struct UnivariatePoly {
    coeffs: Vec<Complex64>,
}

impl UnivariatePoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        let mut p = UnivariatePoly { coeffs };
        p.trim();
        p
    }

    /// Builds a polynomial without trimming tiny leading coefficients.
    ///
    /// Exact zeros at the top are still removed.
    pub fn new_untrimmed(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        UnivariatePoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// The monic polynomial with the given roots, `prod (t - r)`.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        UnivariatePoly { coeffs }
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    /// Degree, with the zero polynomial reported as `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    /// Coefficient of `t^k`, zero past the degree.
    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or_default()
    }

    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn eval(&self, t: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * t + c)
    }

    /// Value and first derivative by a single Horner pass.
    pub fn eval_with_derivative(&self, t: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    }

    /// `sum |c_k| |t|^k`, the natural scale for rounding errors of `eval(t)`.
    pub fn abs_eval(&self, t: Complex64) -> f64 {
        let r = t.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::new_untrimmed(coeffs)
    }

    /// `p(t + a)`, by repeated synthetic division.
    pub fn shifted(&self, a: Complex64) -> Self {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for k in (i..n - 1).rev() {
                let upper = c[k + 1];
                c[k] += a * upper;
            }
        }
        Self::new_untrimmed(c)
    }

    /// Scaled copy whose largest coefficient modulus is 1.
    pub fn normalized(&self) -> Self {
        let m = self.max_coeff_norm();
        if m == 0.0 {
            return self.clone();
        }
        UnivariatePoly {
            coeffs: self.coeffs.iter().map(|c| c / m).collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self::new_untrimmed(self.coeffs.iter().map(|c| c * factor).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) + other.coeff(k)).collect();
        Self::new_untrimmed(coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..n).map(|k| self.coeff(k) - other.coeff(k)).collect();
        Self::new_untrimmed(coeffs)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::new_untrimmed(coeffs)
    }

    /// Synthetic division by `(t - root)`: returns quotient and remainder.
    pub fn divide_linear(&self, root: Complex64) -> (Self, Complex64) {
        if self.coeffs.is_empty() {
            return (Self::zero(), Complex64::new(0.0, 0.0));
        }
        let n = self.coeffs.len();
        let mut quotient = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (0..n).rev() {
            acc = acc * root + self.coeffs[k];
            if k > 0 {
                quotient[k - 1] = acc;
            }
        }
        (Self::new_untrimmed(quotient), acc)
    }

    /// Removes top coefficients below the relative zero threshold.
    fn trim(&mut self) {
        let m = self.max_coeff_norm();
        let cut = ZERO_THRESHOLD * m;
        while self.coeffs.last().is_some_and(|c| c.norm() <= cut) {
            self.coeffs.pop();
        }
    }

    /// Trims with an explicit relative threshold.
    pub fn trimmed(&self, relative: f64) -> Self {
        let m = self.max_coeff_norm();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.norm() <= relative * m) {
            coeffs.pop();
        }
        UnivariatePoly { coeffs }
    }
}

impl fmt::Display for UnivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if *c == Complex64::new(0.0, 0.0) {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({}{:+}i)", c.re, c.im)?;
            match k {
                0 => {}
                1 => write!(f, "*t")?,
                _ => write!(f, "*t^{k}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trims_negligible_leading_terms() {
        let p = UnivariatePoly::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-15, 0.0)]);
        assert_eq!(p.degree(), Some(1));
        assert!(UnivariatePoly::new(vec![c(0.0, 0.0)]).is_zero());
    }

    #[test]
    fn shift_moves_roots() {
        let roots = [c(1.0, 2.0), c(-0.5, 0.0), c(3.0, -1.0)];
        let a = c(0.7, -0.3);
        let p = UnivariatePoly::from_roots(&roots).shifted(a);
        let moved: Vec<Complex64> = roots.iter().map(|r| r - a).collect();
        let q = UnivariatePoly::from_roots(&moved);
        for k in 0..4 {
            assert!((p.coeff(k) - q.coeff(k)).norm() < 1e-12);
        }
    }

    #[test]
    fn from_roots_expands_product() {
        let p = UnivariatePoly::from_roots(&[c(1.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(p.coeffs(), &[c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn horner_value_and_derivative() {
        let p = UnivariatePoly::from_real(&[1.0, -3.0, 0.0, 2.0]);
        let t = c(0.5, -1.25);
        let (v, dv) = p.eval_with_derivative(t);
        assert!((v - (c(1.0, 0.0) - 3.0 * t + 2.0 * t * t * t)).norm() < 1e-14);
        assert!((dv - (c(-3.0, 0.0) + 6.0 * t * t)).norm() < 1e-14);
        assert!((p.derivative().eval(t) - dv).norm() < 1e-14);
    }

    #[test]
    fn synthetic_division_recovers_cofactor() {
        let q = UnivariatePoly::from_roots(&[c(2.0, 1.0), c(-0.5, 0.0)]);
        let p = q.mul(&UnivariatePoly::from_roots(&[c(0.25, 3.0)]));
        let (quot, rem) = p.divide_linear(c(0.25, 3.0));
        assert!(rem.norm() < 1e-12);
        for (a, b) in quot.coeffs().iter().zip(q.coeffs()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
