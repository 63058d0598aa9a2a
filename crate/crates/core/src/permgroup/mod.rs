//! Permutation groups: generation, order, orbits, blocks, transitivity and
//! classification.

mod blocks;
pub mod brute;
mod chain;
mod group;
mod lemmas;
mod perm;

use thiserror::Error;

pub use blocks::{is_block_system, minimal_block};
pub use chain::StabilizerChain;
pub use group::{factorial, GroupLabel, PermGroup, SetStabilizer};
pub use lemmas::{lemma1_check, lemma2_check, Lemma2Outcome};
pub use perm::Permutation;

/// Groups up to this order are cross-checked against exhaustive closure.
pub const CROSS_CHECK_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("not a bijection: {0:?}")]
    NotABijection(Vec<usize>),
    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },
    #[error("generator of degree {got} in a group of degree {expected}")]
    DegreeMismatch { expected: usize, got: usize },
    #[error("column {column}: {message}")]
    Syntax { column: usize, message: String },
    #[error("cannot stabilize every point")]
    StabilizerOfEverything,
    #[error("precondition violated: {0}")]
    Precondition(String),
}

impl PermGroup {
    /// Compares the chain order with exhaustive closure; `None` when the group is
    /// too large to enumerate.
    pub fn cross_check_order(&self) -> Option<bool> {
        let elements = brute::closure(self.degree(), self.generators(), CROSS_CHECK_LIMIT)?;
        Some(num_bigint::BigUint::from(elements.len()) == self.order())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_group() -> impl Strategy<Value = PermGroup> {
        (2usize..=6).prop_flat_map(|n| {
            proptest::collection::vec(Just((0..n).collect::<Vec<usize>>()).prop_shuffle(), 0..4)
                .prop_map(move |gens| {
                    PermGroup::generate(n, gens.into_iter().map(|g| Permutation::new(g).unwrap()).collect()).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn chain_order_matches_closure(g in arb_group()) {
            prop_assert_eq!(g.cross_check_order(), Some(true));
        }

        #[test]
        fn transitivity_matches_tuple_count(g in arb_group()) {
            let elements = brute::closure(g.degree(), g.generators(), CROSS_CHECK_LIMIT).unwrap();
            let expected = if g.is_transitive() { brute::transitivity_degree(g.degree(), &elements) } else { 0 };
            prop_assert_eq!(g.transitivity_degree(), expected);
        }

        #[test]
        fn block_systems_are_valid(g in arb_group()) {
            for system in g.pair_block_systems() {
                prop_assert!(is_block_system(&system, g.generators()));
                let size = system[0].len();
                prop_assert_eq!(g.degree() % size, 0);
                prop_assert!(system.iter().all(|b| b.len() == size));
                prop_assert_eq!(system.len(), g.degree() / size);
            }
        }

        #[test]
        fn two_transitive_groups_are_primitive(g in arb_group()) {
            if g.transitivity_degree() >= 2 {
                prop_assert!(g.is_primitive());
            }
        }

        #[test]
        fn membership_agrees_with_closure(g in arb_group()) {
            let elements = brute::closure(g.degree(), g.generators(), CROSS_CHECK_LIMIT).unwrap();
            prop_assert!(elements.iter().all(|e| g.contains(e)));
        }
    }
}
