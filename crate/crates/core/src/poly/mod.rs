//! Floating-coefficient polynomial arithmetic: forms, univariate polynomials,
//! root finding, resultants and discriminants.

mod discriminant;
mod homogeneous;
pub mod parse;
mod resultant;
mod roots;
mod univariate;

use thiserror::Error;

pub use discriminant::{
    discriminant_by_roots, discriminant_degree_bound, discriminant_on_line, fiber_at, sampled_discriminant, SampledDiscriminant,
};
pub use homogeneous::{monomials, ComplexPoint, Exponents, HomogeneousPoly};
pub use parse::{format_complex, format_form, parse_complex, parse_form, parse_point, ParseError};
pub use resultant::{determinant, discriminant, resultant, sylvester_matrix};
pub use roots::{cmp_complex, roots, roots_with_tolerance, ROOT_RESIDUAL_TOLERANCE};
pub use univariate::{UnivariatePoly, ZERO_THRESHOLD};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PolyError {
    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("term of degree {got} in a form of degree {expected}")]
    NotHomogeneous { expected: u32, got: u32 },
    #[error("forms need at least 3 variables, got {0}")]
    TooFewVariables(usize),
    #[error("polynomial degree too low for this operation")]
    DegreeTooLow,
    #[error("root finding did not converge (residual {residual:e})")]
    NoConvergence { residual: f64 },
    #[error("leading coefficient vanishes at a sample point")]
    LeadingCoefficientVanishes,
    #[error("discriminant is numerically identically zero")]
    IdenticallyZeroDiscriminant,
}
