use std::f64::consts::PI;

use num_complex::Complex64;

use super::resultant::discriminant;
use super::roots::roots;
use super::univariate::{UnivariatePoly, ZERO_THRESHOLD};
use super::PolyError;

/// A discriminant whose coefficients stay within this factor of the interpolation
/// noise is indistinguishable from zero.
const SIGNAL_TO_NOISE: f64 = 1e3;

/// Evaluates a bivariate family `f(s, t) = sum_k c_k(s) t^k` at fixed `s`.
pub fn fiber_at(coeffs: &[UnivariatePoly], s: Complex64) -> UnivariatePoly {
    UnivariatePoly::new_untrimmed(coeffs.iter().map(|c| c.eval(s)).collect())
}

/// `lc^{2m-2} prod_{i<j} (r_i - r_j)^2` from the computed roots.
///
/// Away from collisions this is far more accurate than the Sylvester determinant,
/// whose rounding error scales with the coefficients rather than the value.
pub fn discriminant_by_roots(fiber: &UnivariatePoly) -> Result<Complex64, PolyError> {
    let m = fiber.coeffs().len() - 1;
    let rs = roots(fiber)?;
    if rs.len() != m {
        return Err(PolyError::DegreeTooLow);
    }
    let mut v = fiber.leading().powi(2 * m as i32 - 2);
    for i in 0..m {
        for j in i + 1..m {
            let d = rs[i] - rs[j];
            v *= d * d;
        }
    }
    Ok(v)
}

/// Upper bound on `deg_s Disc_t f` from the total degree of `f` in `(s, t)`.
///
/// With `w = max_k (deg c_k + k)`, the resultant of `f` and `∂f/∂t` has s-degree at
/// most `w (w - 1)`, and dividing by the leading coefficient can only lower it.
pub fn discriminant_degree_bound(coeffs: &[UnivariatePoly]) -> usize {
    let total = coeffs
        .iter()
        .enumerate()
        .filter_map(|(k, c)| c.degree().map(|d| d + k))
        .max()
        .unwrap_or(0);
    total * total.saturating_sub(1)
}

/// The t-discriminant of `f(s, t)` as a polynomial in `s`.
///
/// Values `Disc_t f(s_j, ·)` are taken at `2(D + 1)` points equally spaced on the
/// circle `|s| = radius` and the coefficients recovered by a discrete Fourier
/// transform, where `D` is the total-degree bound above. The fiber degree is the length of
/// `coeffs` minus one.
pub fn discriminant_on_line(coeffs: &[UnivariatePoly], radius: f64) -> Result<UnivariatePoly, PolyError> {
    let sampled = sampled_discriminant(coeffs, Complex64::new(0.0, 0.0), radius)?;
    let scaled = sampled.local.coeffs().iter().enumerate().map(|(k, c)| c / radius.powi(k as i32));
    Ok(UnivariatePoly::new(scaled.collect()).trimmed(ZERO_THRESHOLD))
}

/// The discriminant interpolated on one circle, in the local variable
/// `u = (s - center) / radius`, with an estimate of its rounding error.
#[derive(Clone, Debug)]
pub struct SampledDiscriminant {
    pub local: UnivariatePoly,
    pub center: Complex64,
    pub radius: f64,
    /// Observed error level of the coefficients of `local`.
    pub coefficient_noise: f64,
}

impl SampledDiscriminant {
    fn to_local(&self, s: Complex64) -> Complex64 {
        (s - self.center) / self.radius
    }

    pub fn degree(&self) -> Option<usize> {
        self.local.degree()
    }

    /// Zeros in the original variable `s`.
    pub fn zeros(&self) -> Result<Vec<Complex64>, PolyError> {
        Ok(roots(&self.local)?.into_iter().map(|u| self.center + u * self.radius).collect())
    }

    /// `|dDisc/ds|` at `s`.
    pub fn slope(&self, s: Complex64) -> f64 {
        self.local.eval_with_derivative(self.to_local(s)).1.norm() / self.radius
    }

    /// Estimated absolute error of the interpolant at `s`.
    ///
    /// Sample errors spread evenly over the local coefficients; the factor 4 covers
    /// the gap between the observed and the worst-case level.
    pub fn noise_at(&self, s: Complex64) -> f64 {
        let u = self.to_local(s);
        let ratio = u.norm();
        let spread: f64 = (0..self.local.coeffs().len()).map(|k| ratio.powi(k as i32)).sum();
        4.0 * self.coefficient_noise * spread + 8.0 * f64::EPSILON * self.local.abs_eval(u)
    }
}

/// Samples and interpolates the discriminant on the circle `|s - center| = radius`.
///
/// Oversampling by two leaves `D + 1` coefficients that must vanish; their size
/// measures the rounding error of the rest.
pub fn sampled_discriminant(
    coeffs: &[UnivariatePoly],
    center: Complex64,
    radius: f64,
) -> Result<SampledDiscriminant, PolyError> {
    let m = coeffs.len().saturating_sub(1);
    if m < 2 {
        return Err(PolyError::DegreeTooLow);
    }
    let bound = discriminant_degree_bound(coeffs).max(1);
    let n = 2 * (bound + 1);
    let mut values = Vec::with_capacity(n);
    for j in 0..n {
        let s = center + Complex64::from_polar(radius, 2.0 * PI * j as f64 / n as f64);
        let fiber = fiber_at(coeffs, s);
        if fiber.coeffs().len() != m + 1 || fiber.leading().norm() == 0.0 {
            return Err(PolyError::LeadingCoefficientVanishes);
        }
        let v = discriminant_by_roots(&fiber).or_else(|_| discriminant(&fiber))?;
        values.push(v);
    }
    let mut out = Vec::with_capacity(bound + 1);
    let mut coefficient_noise: f64 = 0.0;
    let mut signal: f64 = 0.0;
    for k in 0..n {
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in values.iter().enumerate() {
            let angle = -2.0 * PI * ((j * k) % n) as f64 / n as f64;
            acc += v * Complex64::from_polar(1.0, angle);
        }
        let scaled = acc / n as f64;
        if k <= bound {
            signal = signal.max(scaled.norm());
            out.push(scaled);
        } else {
            coefficient_noise = coefficient_noise.max(scaled.norm());
        }
    }
    if signal <= SIGNAL_TO_NOISE * coefficient_noise {
        return Err(PolyError::IdenticallyZeroDiscriminant);
    }
    Ok(SampledDiscriminant {
        local: UnivariatePoly::new(out).trimmed(ZERO_THRESHOLD),
        center,
        radius,
        coefficient_noise,
    })
}
