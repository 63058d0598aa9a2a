//! Checkable forms of the transitivity and primitivity lemmas used by the
//! monodromy arguments.

use super::group::PermGroup;
use super::GroupError;

/// Evaluates both sides of the point-stabilizer criterion for k-transitivity:
/// `(G is k-transitive on Ω, Stab_G(i) is (k-1)-transitive on Ω∖{i})`.
///
/// The two sides are computed from independently built stabilizer chains (one with
/// base `0, 1, ..`, one rooted at `i`); for a correct kernel they always agree.
pub fn lemma1_check(g: &PermGroup, i: usize, k: usize) -> Result<(bool, bool), GroupError> {
    let d = g.degree();
    if i >= d {
        return Err(GroupError::PointOutOfRange { point: i, degree: d });
    }
    if !g.is_transitive() {
        return Err(GroupError::Precondition("group is not transitive".into()));
    }
    if k == 0 || k > d.saturating_sub(1) {
        return Err(GroupError::Precondition(format!("need 1 <= k <= degree - 1, got k = {k}")));
    }
    let whole = g.transitivity_degree() >= k;
    let stab = g.stabilizer(&[i])?;
    let part = k == 1 || stab.restricted.transitivity_degree() >= k - 1;
    Ok((whole, part))
}

/// Outcome of checking the primitive-plus-transitive-stabilizer criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Lemma2Outcome {
    /// Preconditions hold; the flag says whether G is indeed 2-transitive.
    Checked(bool),
    /// A precondition failed; no conclusion is drawn.
    PreconditionViolated(String),
}

/// For G primitive, `0 < |A| <= d - 2` and the pointwise stabilizer of A transitive
/// on Ω∖A, G must be 2-transitive.
pub fn lemma2_check(g: &PermGroup, set: &[usize]) -> Result<Lemma2Outcome, GroupError> {
    let d = g.degree();
    let mut a: Vec<usize> = set.to_vec();
    a.sort_unstable();
    a.dedup();
    if a.is_empty() || a.len() + 2 > d {
        return Ok(Lemma2Outcome::PreconditionViolated(format!(
            "|A| = {} outside 1..={}",
            a.len(),
            d.saturating_sub(2)
        )));
    }
    if !g.is_primitive() {
        return Ok(Lemma2Outcome::PreconditionViolated("group is not primitive".into()));
    }
    let stab = g.stabilizer(&a)?;
    if !stab.restricted.is_transitive() {
        return Ok(Lemma2Outcome::PreconditionViolated(
            "stabilizer of A is not transitive on the complement".into(),
        ));
    }
    Ok(Lemma2Outcome::Checked(g.transitivity_degree() >= 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::Permutation;

    fn group(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::generate(n, gens.iter().map(|g| Permutation::parse(g, n).unwrap()).collect()).unwrap()
    }

    #[test]
    fn lemma1_examples() {
        assert_eq!(lemma1_check(&PermGroup::symmetric(4), 0, 3).unwrap(), (true, true));
        let a4 = group(4, &["(0 1 2)", "(1 2 3)"]);
        assert_eq!(lemma1_check(&a4, 0, 3).unwrap(), (false, false));
        assert_eq!(lemma1_check(&group(4, &["(0 1 2 3)"]), 0, 2).unwrap(), (false, false));
        assert!(lemma1_check(&group(4, &["(0 1)"]), 0, 1).is_err());
    }

    #[test]
    fn lemma2_examples() {
        assert_eq!(lemma2_check(&PermGroup::symmetric(4), &[0, 1]).unwrap(), Lemma2Outcome::Checked(true));
        let a5 = group(5, &["(0 1 2)", "(0 1 2 3 4)"]);
        assert_eq!(a5.order(), num_bigint::BigUint::from(60u32));
        assert_eq!(lemma2_check(&a5, &[0]).unwrap(), Lemma2Outcome::Checked(true));
        let klein = group(4, &["(0 1)(2 3)", "(0 2)(1 3)"]);
        assert!(matches!(
            lemma2_check(&klein, &[0]).unwrap(),
            Lemma2Outcome::PreconditionViolated(_)
        ));
        assert!(matches!(
            lemma2_check(&PermGroup::symmetric(4), &[0, 1, 2]).unwrap(),
            Lemma2Outcome::PreconditionViolated(_)
        ));
    }
}
