//! Stabilizer chains built with the deterministic Schreier–Sims algorithm.

use std::collections::HashSet;

use num_bigint::BigUint;

use super::perm::Permutation;

#[derive(Clone, Debug)]
struct Level {
    point: usize,
    gens: Vec<Permutation>,
    orbit: Vec<usize>,
    /// `transversal[b] = (u, u^-1)` with `u` sending `point` to `b`.
    transversal: Vec<Option<(Permutation, Permutation)>>,
    verified: HashSet<(usize, usize)>,
}

impl Level {
    fn new(point: usize, degree: usize) -> Self {
        let mut transversal = vec![None; degree];
        let id = Permutation::identity(degree);
        transversal[point] = Some((id.clone(), id));
        Level {
            point,
            gens: Vec::new(),
            orbit: vec![point],
            transversal,
            verified: HashSet::new(),
        }
    }

    /// Extends the orbit under the current generators; existing transversal
    /// entries are never replaced, so earlier sifts stay valid.
    fn grow_orbit(&mut self) {
        let mut idx = 0;
        while idx < self.orbit.len() {
            let b = self.orbit[idx];
            for g in &self.gens {
                let c = g.apply(b);
                if self.transversal[c].is_none() {
                    let u = self.transversal[b].as_ref().map(|(u, _)| u.then(g)).unwrap_or_else(|| g.clone());
                    let inv = u.inverse();
                    self.transversal[c] = Some((u, inv));
                    self.orbit.push(c);
                }
            }
            idx += 1;
        }
    }
}

/// Base and strong generating set of a permutation group.
#[derive(Clone, Debug)]
pub struct StabilizerChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabilizerChain {
    pub fn new(degree: usize, gens: &[Permutation]) -> Self {
        Self::with_base_prefix(degree, gens, &[])
    }

    /// Chain whose base starts with `prefix` (in that order), extended as needed.
    pub fn with_base_prefix(degree: usize, gens: &[Permutation], prefix: &[usize]) -> Self {
        let gens: Vec<Permutation> = gens.iter().filter(|g| !g.is_identity()).cloned().collect();
        let mut base: Vec<usize> = prefix.to_vec();
        for g in &gens {
            if base.iter().all(|&b| g.apply(b) == b) {
                if let Some(p) = g.first_moved() {
                    base.push(p);
                }
            }
        }
        let mut levels: Vec<Level> = base.iter().map(|&b| Level::new(b, degree)).collect();
        for (l, level) in levels.iter_mut().enumerate() {
            level.gens = gens
                .iter()
                .filter(|g| base[..l].iter().all(|&b| g.apply(b) == b))
                .cloned()
                .collect();
            level.grow_orbit();
        }
        let mut chain = StabilizerChain { degree, levels };
        chain.complete();
        chain
    }

    fn complete(&mut self) {
        let mut i = self.levels.len() as isize - 1;
        'outer: while i >= 0 {
            let l = i as usize;
            let mut oi = 0;
            while oi < self.levels[l].orbit.len() {
                let b = self.levels[l].orbit[oi];
                let ngens = self.levels[l].gens.len();
                for si in 0..ngens {
                    if self.levels[l].verified.contains(&(b, si)) {
                        continue;
                    }
                    let level = &self.levels[l];
                    let s = &level.gens[si];
                    let c = s.apply(b);
                    let (ub, _) = level.transversal[b].as_ref().expect("orbit point has a transversal");
                    let (_, uc_inv) = level.transversal[c].as_ref().expect("orbit is closed");
                    let schreier = ub.then(s).then(uc_inv);
                    let (residue, depth) = self.sift_from(&schreier, l + 1);
                    if residue.is_identity() {
                        self.levels[l].verified.insert((b, si));
                        continue;
                    }
                    if depth == self.levels.len() {
                        let p = residue.first_moved().expect("nonidentity residue moves a point");
                        self.levels.push(Level::new(p, self.degree));
                    }
                    for level in &mut self.levels[l + 1..=depth] {
                        level.gens.push(residue.clone());
                        level.grow_orbit();
                    }
                    i = depth as isize;
                    continue 'outer;
                }
                oi += 1;
            }
            i -= 1;
        }
    }

    /// Strips `g` through levels `start..`; returns the residue and the level where
    /// sifting stopped (`levels.len()` when it passed every level).
    fn sift_from(&self, g: &Permutation, start: usize) -> (Permutation, usize) {
        let mut h = g.clone();
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let b = h.apply(level.point);
            match &level.transversal[b] {
                Some((_, inv)) => h = h.then(inv),
                None => return (h, l),
            }
        }
        (h, self.levels.len())
    }

    pub fn contains(&self, g: &Permutation) -> bool {
        g.degree() == self.degree && self.sift_from(g, 0).0.is_identity()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn basic_orbit_sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn basic_orbit(&self, level: usize) -> &[usize] {
        &self.levels[level].orbit
    }

    /// Strong generators fixing the first `level` base points.
    pub fn level_generators(&self, level: usize) -> &[Permutation] {
        self.levels.get(level).map(|l| l.gens.as_slice()).unwrap_or(&[])
    }

    pub fn order(&self) -> BigUint {
        self.levels
            .iter()
            .fold(BigUint::from(1u32), |acc, l| acc * BigUint::from(l.orbit.len()))
    }

    /// Every group element, as products of transversal representatives.
    pub fn elements(&self) -> Vec<Permutation> {
        let mut out = vec![Permutation::identity(self.degree)];
        for level in self.levels.iter().rev() {
            let mut next = Vec::with_capacity(out.len() * level.orbit.len());
            for &b in &level.orbit {
                let (u, _) = level.transversal[b].as_ref().expect("orbit point has a transversal");
                for g in &out {
                    next.push(g.then(u));
                }
            }
            out = next;
        }
        out
    }
}
