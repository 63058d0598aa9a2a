//! Exhaustive reference computations for small groups.
//!
//! Everything here works from the full element list obtained by closing the
//! generators under multiplication, so it shares no code path with the
//! stabilizer-chain machinery and can be used to cross-check it.

use std::collections::{HashSet, VecDeque};

use super::perm::Permutation;

/// Breadth-first closure of the generators; `None` once more than `limit`
/// elements have been found.
pub fn closure(degree: usize, gens: &[Permutation], limit: usize) -> Option<Vec<Permutation>> {
    let id = Permutation::identity(degree);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut order = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if seen.len() > limit {
                    return None;
                }
                order.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    Some(order)
}

/// k-transitivity by counting the orbit of the tuple `(0, .., k-1)` on ordered
/// k-tuples of distinct points.
pub fn is_k_transitive(degree: usize, elements: &[Permutation], k: usize) -> bool {
    if k == 0 {
        return true;
    }
    if k > degree {
        return false;
    }
    let tuples: HashSet<Vec<usize>> = elements.iter().map(|g| (0..k).map(|i| g.apply(i)).collect()).collect();
    let expected: usize = (degree - k + 1..=degree).product();
    tuples.len() == expected
}

pub fn transitivity_degree(degree: usize, elements: &[Permutation]) -> usize {
    (1..=degree).take_while(|&k| is_k_transitive(degree, elements, k)).count()
}

/// Whether `set` satisfies `g(B) = B or g(B) ∩ B = ∅` for every listed element.
pub fn is_block(set: &[usize], elements: &[Permutation]) -> bool {
    let b: HashSet<usize> = set.iter().copied().collect();
    elements.iter().all(|g| {
        let image: HashSet<usize> = set.iter().map(|&p| g.apply(p)).collect();
        image == b || image.is_disjoint(&b)
    })
}

/// All nontrivial blocks containing point 0, by scanning every subset.
pub fn blocks_containing_zero(degree: usize, elements: &[Permutation]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << degree) {
        if mask & 1 == 0 {
            continue;
        }
        let set: Vec<usize> = (0..degree).filter(|i| mask >> i & 1 == 1).collect();
        if set.len() > 1 && set.len() < degree && is_block(&set, elements) {
            out.push(set);
        }
    }
    out
}

/// Pointwise stabilizer of `set` as an element list.
pub fn stabilizer(elements: &[Permutation], set: &[usize]) -> Vec<Permutation> {
    elements
        .iter()
        .filter(|g| set.iter().all(|&a| g.apply(a) == a))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closure_sizes() {
        let gens = vec![Permutation::parse("(0 1)", 4).unwrap(), Permutation::parse("(0 1 2 3)", 4).unwrap()];
        assert_eq!(closure(4, &gens, 1000).unwrap().len(), 24);
        assert!(closure(4, &gens, 10).is_none());
        let a4 = vec![Permutation::parse("(0 1 2)", 4).unwrap(), Permutation::parse("(1 2 3)", 4).unwrap()];
        let e = closure(4, &a4, 100).unwrap();
        assert!(is_k_transitive(4, &e, 2));
        assert!(!is_k_transitive(4, &e, 3));
        let c5 = closure(5, &[Permutation::parse("(0 1 2 3 4)", 5).unwrap()], 100).unwrap();
        assert_eq!(transitivity_degree(5, &c5), 1);
        assert!(blocks_containing_zero(5, &c5).is_empty());
    }
}
