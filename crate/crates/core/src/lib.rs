//! Monodromy groups of linear projections of complex projective hypersurfaces.
//!
//! A hypersurface `X = {F = 0}` is projected from a center `P`. Over a generic
//! line in the target the projection becomes a one-parameter family of
//! univariate polynomials whose roots are tracked around the branch points; the
//! resulting permutations generate the monodromy group, which is then
//! classified. A center is uniform when that group is the full symmetric group.

pub mod classifier;
pub mod cli;
pub mod fibration;
pub mod permgroup;
pub mod poly;
pub mod random;
pub mod tolerances;
pub mod tracker;
