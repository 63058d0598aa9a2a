use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use serde::Serialize;

use super::blocks::minimal_block;
use super::chain::StabilizerChain;
use super::perm::Permutation;
use super::GroupError;

/// A permutation group on `{0, .., degree-1}` given by generators, with its
/// stabilizer chain.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Permutation>,
    chain: StabilizerChain,
}

/// Result of a pointwise set stabilizer computation.
#[derive(Clone, Debug)]
pub struct SetStabilizer {
    /// The stabilizer acting on all of Ω.
    pub on_omega: PermGroup,
    /// The same group acting on Ω∖A, relabeled to `0..degree-|A|`.
    pub restricted: PermGroup,
    /// `points[j]` is the original point carrying restricted label `j`.
    pub points: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum GroupLabel {
    Symmetric,
    Alternating,
    Cyclic,
    Imprimitive { block_sizes: Vec<usize> },
    Other,
}

impl fmt::Display for GroupLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupLabel::Symmetric => write!(f, "symmetric"),
            GroupLabel::Alternating => write!(f, "alternating"),
            GroupLabel::Cyclic => write!(f, "cyclic"),
            GroupLabel::Imprimitive { block_sizes } => {
                let sizes: Vec<String> = block_sizes.iter().map(|s| s.to_string()).collect();
                write!(f, "imprimitive(blocks {})", sizes.join(","))
            }
            GroupLabel::Other => write!(f, "other"),
        }
    }
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::from(1u32), |acc, k| acc * BigUint::from(k))
}

impl PermGroup {
    pub fn generate(degree: usize, gens: Vec<Permutation>) -> Result<Self, GroupError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    got: g.degree(),
                });
            }
        }
        let chain = StabilizerChain::new(degree, &gens);
        Ok(PermGroup {
            degree,
            generators: gens,
            chain,
        })
    }

    pub fn symmetric(degree: usize) -> Self {
        let mut gens = Vec::new();
        if degree >= 2 {
            gens.push(Permutation::from_cycles(degree, &[&[0, 1]]).expect("valid"));
            gens.push(Permutation::from_cycles(degree, &[&(0..degree).collect::<Vec<_>>()]).expect("valid"));
        }
        Self::generate(degree, gens).expect("valid generators")
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn chain(&self) -> &StabilizerChain {
        &self.chain
    }

    pub fn order(&self) -> BigUint {
        self.chain.order()
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        self.chain.contains(g)
    }

    /// All elements, enumerated from the stabilizer chain.
    pub fn elements(&self) -> Vec<Permutation> {
        self.chain.elements()
    }

    /// Orbit partition, each orbit sorted, orbits ordered by smallest point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.degree);
        for g in &self.generators {
            for i in 0..self.degree {
                uf.union(i, g.apply(i));
            }
        }
        uf.classes()
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbits().len() == 1
    }

    /// Largest k such that the group is k-transitive (0 if intransitive).
    ///
    /// Uses a chain with base `0, 1, 2, ..`: the group is k-transitive exactly when
    /// the first k basic orbits have sizes `d, d-1, .., d-k+1`, i.e. each successive
    /// point stabilizer is transitive on the remaining points.
    pub fn transitivity_degree(&self) -> usize {
        if self.degree == 0 {
            return 0;
        }
        let prefix: Vec<usize> = (0..self.degree).collect();
        let chain = StabilizerChain::with_base_prefix(self.degree, &self.generators, &prefix);
        chain
            .basic_orbit_sizes()
            .iter()
            .enumerate()
            .take_while(|(l, &size)| size == self.degree - l)
            .count()
    }

    /// Pointwise stabilizer of `set`.
    pub fn stabilizer(&self, set: &[usize]) -> Result<SetStabilizer, GroupError> {
        let mut prefix: Vec<usize> = Vec::new();
        for &a in set {
            if a >= self.degree {
                return Err(GroupError::PointOutOfRange { point: a, degree: self.degree });
            }
            if !prefix.contains(&a) {
                prefix.push(a);
            }
        }
        if prefix.len() >= self.degree {
            return Err(GroupError::StabilizerOfEverything);
        }
        let chain = StabilizerChain::with_base_prefix(self.degree, &self.generators, &prefix);
        let gens = chain.level_generators(prefix.len()).to_vec();
        let on_omega = PermGroup::generate(self.degree, gens.clone())?;

        let points: Vec<usize> = (0..self.degree).filter(|p| !prefix.contains(p)).collect();
        let mut index = vec![usize::MAX; self.degree];
        for (j, &p) in points.iter().enumerate() {
            index[p] = j;
        }
        let restricted_gens = gens
            .iter()
            .map(|g| Permutation::new(points.iter().map(|&p| index[g.apply(p)]).collect()))
            .collect::<Result<Vec<_>, _>>()?;
        let restricted = PermGroup::generate(points.len(), restricted_gens)?;
        Ok(SetStabilizer {
            on_omega,
            restricted,
            points,
        })
    }

    /// Distinct nontrivial block systems generated by a pair `{0, b}`, sorted by
    /// block size. Every minimal nontrivial system is among them.
    pub fn pair_block_systems(&self) -> Vec<Vec<Vec<usize>>> {
        if !self.is_transitive() || self.degree < 3 {
            return Vec::new();
        }
        let mut seen = BTreeSet::new();
        for b in 1..self.degree {
            let system = minimal_block(self.degree, &self.generators, 0, b);
            if system.len() > 1 {
                seen.insert((system[0].len(), system));
            }
        }
        seen.into_iter().map(|(_, s)| s).collect()
    }

    /// Minimal nontrivial block systems: those whose blocks contain no smaller
    /// nontrivial block.
    pub fn block_systems(&self) -> Vec<Vec<Vec<usize>>> {
        let all = self.pair_block_systems();
        let block_of_zero = |s: &Vec<Vec<usize>>| s.iter().find(|b| b.contains(&0)).cloned().unwrap_or_default();
        all.iter()
            .filter(|s| {
                let mine = block_of_zero(s);
                !all.iter().any(|t| {
                    let theirs = block_of_zero(t);
                    theirs.len() < mine.len() && theirs.iter().all(|p| mine.contains(p))
                })
            })
            .cloned()
            .collect()
    }

    pub fn is_primitive(&self) -> bool {
        self.is_transitive() && self.pair_block_systems().is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        self.order() == factorial(self.degree)
    }

    pub fn is_alternating(&self) -> bool {
        self.degree >= 2 && self.order() * 2u32 == factorial(self.degree) && self.generators.iter().all(Permutation::is_even)
    }

    /// Cyclic test without enumeration: an abelian group is cyclic exactly when the
    /// lcm of its generators' orders equals the group order.
    pub fn is_cyclic(&self) -> bool {
        let gens = &self.generators;
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                if a.then(b) != b.then(a) {
                    return false;
                }
            }
        }
        let exponent = gens.iter().fold(BigUint::from(1u32), |acc, g| acc.lcm(&g.order()));
        exponent == self.order()
    }

    /// All classification labels that apply; `Other` only when none does.
    pub fn classify(&self) -> Vec<GroupLabel> {
        let mut labels = Vec::new();
        if self.is_symmetric() {
            labels.push(GroupLabel::Symmetric);
        }
        if self.is_alternating() {
            labels.push(GroupLabel::Alternating);
        }
        if self.is_cyclic() {
            labels.push(GroupLabel::Cyclic);
        }
        let systems = self.pair_block_systems();
        if !systems.is_empty() {
            let mut sizes: Vec<usize> = systems.iter().map(|s| s[0].len()).collect();
            sizes.dedup();
            labels.push(GroupLabel::Imprimitive { block_sizes: sizes });
        }
        if labels.is_empty() {
            labels.push(GroupLabel::Other);
        }
        labels
    }

    /// Conjugate group obtained by relabeling points.
    pub fn relabeled(&self, relabel: &Permutation) -> Result<PermGroup, GroupError> {
        PermGroup::generate(self.degree, self.generators.iter().map(|g| g.relabeled(relabel)).collect())
    }
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Merges the classes of `a` and `b`; returns false if already merged.
    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi] = lo;
        true
    }

    pub(crate) fn classes(&mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for i in 0..n {
            let r = self.find(i);
            by_root[r].push(i);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}
