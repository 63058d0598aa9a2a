use num_complex::Complex64;

use super::univariate::UnivariatePoly;
use super::PolyError;

/// Determinant of a dense complex matrix by Gaussian elimination with partial pivoting.
pub fn determinant(mut m: Vec<Vec<Complex64>>) -> Complex64 {
    let n = m.len();
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].norm().total_cmp(&m[b][col].norm()))
            .unwrap_or(col);
        if m[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        let p = m[col][col];
        det *= p;
        for row in col + 1..n {
            let factor = m[row][col] / p;
            if factor.norm() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = m[col][k];
                m[row][k] -= factor * v;
            }
        }
    }
    det
}

/// Sylvester matrix of `p` (degree m) and `q` (degree n), size (m+n)×(m+n).
///
/// The first n rows hold shifted copies of p's coefficients in descending order,
/// the last m rows shifted copies of q's.
pub fn sylvester_matrix(p: &UnivariatePoly, q: &UnivariatePoly) -> Vec<Vec<Complex64>> {
    let m = p.coeffs().len() - 1;
    let n = q.coeffs().len() - 1;
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for shift in 0..n {
        let mut row = vec![Complex64::new(0.0, 0.0); size];
        for (k, c) in p.coeffs().iter().rev().enumerate() {
            row[shift + k] = *c;
        }
        rows.push(row);
    }
    for shift in 0..m {
        let mut row = vec![Complex64::new(0.0, 0.0); size];
        for (k, c) in q.coeffs().iter().rev().enumerate() {
            row[shift + k] = *c;
        }
        rows.push(row);
    }
    rows
}

/// Resultant `Res(p, q) = det Syl(p, q)`.
///
/// Sign convention: `Res(p, q) = lc(p)^{deg q} * prod q(r_i)` over the roots `r_i` of p,
/// so `Res(t - a, t - b) = a - b`.
pub fn resultant(p: &UnivariatePoly, q: &UnivariatePoly) -> Result<Complex64, PolyError> {
    match (p.degree(), q.degree()) {
        (Some(a), Some(b)) if a >= 1 && b >= 1 => Ok(determinant(sylvester_matrix(p, q))),
        _ => Err(PolyError::DegreeTooLow),
    }
}

/// Discriminant `(-1)^{m(m-1)/2} Res(p, p') / lc(p)` of a polynomial of degree m ≥ 2.
///
/// The degree is taken from the stored coefficient vector, so a small leading
/// coefficient is kept rather than trimmed away.
pub fn discriminant(p: &UnivariatePoly) -> Result<Complex64, PolyError> {
    let m = match p.degree() {
        Some(m) if m >= 2 => m,
        _ => return Err(PolyError::DegreeTooLow),
    };
    let dp = p.derivative();
    let res = determinant(sylvester_matrix(p, &dp));
    let sign = if (m * (m - 1) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(res * sign / p.leading())
}
