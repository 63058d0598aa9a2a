//! From a hypersurface and a center to a one-parameter family of fibers over a
//! line, its branch points, and a loop plan around them.

mod branch;
mod family;
mod genericity;
mod loops;
mod projection;

use num_complex::Complex64;
use serde::ser::SerializeSeq;
use serde::Serializer;
use thiserror::Error;

use crate::poly::PolyError;

pub use branch::{branch_points, family_discriminant, BranchPointSet};
pub use family::{slice_to_family, slice_with_line, FiberFamily};
pub use genericity::{genericity_report, GenericityReport};
pub use loops::{plan_loops, plan_loops_with_basepoint, LoopPlan, PathSegment, Petal};
pub use projection::{build_projection, CenterKind, ProjectionInstance, TargetFrame};

pub(crate) use family::expand_on_pencil;
pub(crate) use projection::dot;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FibrationError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the form is identically zero")]
    ZeroForm,
    #[error("the center is the zero vector")]
    ZeroCenter,
    #[error("center is within {value:e} of the hypersurface: neither clearly on nor off it")]
    AmbiguousCenter { value: f64 },
    #[error("the center is a singular point of the hypersurface (gradient {gradient:e})")]
    SingularCenter { gradient: f64 },
    #[error("no target frame away from the center found")]
    DegenerateFrame,
    #[error("deflation residual {residual:e} too large")]
    DeflationResidual { residual: f64 },
    #[error("leading coefficient of the fiber family vanishes")]
    LeadingCoefficientVanishes,
    #[error("branch points only {distance:e} apart")]
    BranchPointsTooClose { distance: f64 },
    #[error("found {found} of {expected} discriminant zeros")]
    MissingBranchPoints { found: usize, expected: usize },
    #[error("basepoint lies inside the branch disk")]
    BasepointInside,
}

pub(crate) fn serialize_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(2))?;
    seq.serialize_element(&z.re)?;
    seq.serialize_element(&z.im)?;
    seq.end()
}

pub(crate) fn serialize_complex_vec<S: Serializer>(v: &[Complex64], s: S) -> Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for z in v {
        seq.serialize_element(&[z.re, z.im])?;
    }
    seq.end()
}
