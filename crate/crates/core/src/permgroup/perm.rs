use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;

use super::GroupError;

/// A bijection of `{0, .., k-1}` stored by its images.
///
/// Composition follows the order in which loops are traversed: `a.then(b)` applies
/// `a` first, so `a.then(b).apply(i) == b.apply(a.apply(i))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<usize>,
}

impl Permutation {
    pub fn new(images: Vec<usize>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(GroupError::NotABijection(images.clone()));
            }
            seen[i] = true;
        }
        Ok(Permutation { images })
    }

    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from disjoint or overlapping cycles, applied left to right.
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, GroupError> {
        let mut result = Permutation::identity(degree);
        for cycle in cycles {
            let mut images: Vec<usize> = (0..degree).collect();
            for (idx, &p) in cycle.iter().enumerate() {
                let q = cycle[(idx + 1) % cycle.len()];
                if p >= degree || q >= degree {
                    return Err(GroupError::PointOutOfRange { point: p.max(q), degree });
                }
                images[p] = q;
            }
            result = result.then(&Permutation::new(images)?);
        }
        Ok(result)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn apply(&self, i: usize) -> usize {
        self.images[i]
    }

    pub fn then(&self, other: &Permutation) -> Permutation {
        Permutation {
            images: self.images.iter().map(|&i| other.images[i]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[j] = i;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &j)| i == j)
    }

    /// The permutation read in new labels: if `relabel` sends old label `i` to
    /// `relabel(i)`, the result sends `relabel(i)` to `relabel(self(i))`.
    pub fn relabeled(&self, relabel: &Permutation) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (i, &j) in self.images.iter().enumerate() {
            images[relabel.apply(i)] = relabel.apply(j);
        }
        Permutation { images }
    }

    /// Disjoint cycles of length at least two, each starting at its smallest point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.images.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![start];
            seen[start] = true;
            let mut j = self.images[start];
            while j != start {
                seen[j] = true;
                cycle.push(j);
                j = self.images[j];
            }
            if cycle.len() > 1 {
                out.push(cycle);
            }
        }
        out
    }

    /// Cycle lengths including fixed points, sorted descending.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut lengths: Vec<usize> = self.cycles().iter().map(Vec::len).collect();
        let moved: usize = lengths.iter().sum();
        lengths.extend(std::iter::repeat_n(1, self.images.len() - moved));
        lengths.sort_unstable_by(|a, b| b.cmp(a));
        lengths
    }

    pub fn is_even(&self) -> bool {
        self.cycles().iter().map(|c| c.len() - 1).sum::<usize>() % 2 == 0
    }

    /// Element order: lcm of the cycle lengths.
    pub fn order(&self) -> BigUint {
        self.cycles()
            .iter()
            .fold(BigUint::from(1u32), |acc, c| acc.lcm(&BigUint::from(c.len())))
    }

    pub fn is_transposition(&self) -> bool {
        let c = self.cycles();
        c.len() == 1 && c[0].len() == 2
    }

    /// First point not fixed, if any.
    pub fn first_moved(&self) -> Option<usize> {
        self.images.iter().enumerate().find(|(i, &j)| *i != j).map(|(i, _)| i)
    }

    /// Parses cycle notation such as `(0 1)(2 3)`; `()` is the identity.
    pub fn parse(text: &str, degree: usize) -> Result<Permutation, GroupError> {
        let err = |column: usize, message: &str| GroupError::Syntax {
            column,
            message: message.to_string(),
        };
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut cycles: Vec<Vec<usize>> = Vec::new();
        let mut used = vec![false; degree];
        let skip_ws = |pos: &mut usize| {
            while *pos < bytes.len() && bytes[*pos].is_ascii_whitespace() {
                *pos += 1;
            }
        };
        skip_ws(&mut pos);
        if pos == bytes.len() {
            return Err(err(1, "empty permutation; write () for the identity"));
        }
        while pos < bytes.len() {
            if bytes[pos] != b'(' {
                return Err(err(pos + 1, "expected '('"));
            }
            pos += 1;
            let mut cycle = Vec::new();
            loop {
                skip_ws(&mut pos);
                if pos >= bytes.len() {
                    return Err(err(pos + 1, "unclosed cycle"));
                }
                if bytes[pos] == b')' {
                    pos += 1;
                    break;
                }
                let start = pos;
                while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                    pos += 1;
                }
                if start == pos {
                    return Err(err(pos + 1, "expected a point"));
                }
                let point: usize = text[start..pos].parse().map_err(|_| err(start + 1, "point too large"))?;
                if point >= degree {
                    return Err(err(start + 1, &format!("point {point} out of range for degree {degree}")));
                }
                if used[point] {
                    return Err(err(start + 1, &format!("point {point} repeated")));
                }
                used[point] = true;
                cycle.push(point);
            }
            if !cycle.is_empty() {
                cycles.push(cycle);
            }
            skip_ws(&mut pos);
        }
        let refs: Vec<&[usize]> = cycles.iter().map(Vec::as_slice).collect();
        Permutation::from_cycles(degree, &refs)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|p| p.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn composition_order() {
        let a = Permutation::parse("(0 1)", 3).unwrap();
        let b = Permutation::parse("(1 2)", 3).unwrap();
        // 0 -a-> 1 -b-> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert_eq!(b.then(&a).apply(0), 1);
        assert!(a.then(&a).is_identity());
    }

    #[test]
    fn cycle_notation_round_trip() {
        let p = Permutation::parse(" (3 0)( 1 4 2 ) ", 6).unwrap();
        assert_eq!(p.to_string(), "(0 3)(1 4 2)");
        assert_eq!(Permutation::parse(&p.to_string(), 6).unwrap(), p);
        assert_eq!(Permutation::identity(4).to_string(), "()");
        assert!(Permutation::parse("()", 4).unwrap().is_identity());
        assert_eq!(p.cycle_type(), vec![3, 2, 1]);
        assert_eq!(p.order(), BigUint::from(6u32));
        assert!(!p.is_even());
    }

    #[test]
    fn malformed_cycles_are_rejected() {
        assert!(matches!(Permutation::parse("(0 1", 3), Err(GroupError::Syntax { .. })));
        assert!(matches!(Permutation::parse("(0 3)", 3), Err(GroupError::Syntax { column: 4, .. })));
        assert!(matches!(Permutation::parse("(0 1)(1 2)", 3), Err(GroupError::Syntax { .. })));
        assert!(matches!(Permutation::parse("0 1", 3), Err(GroupError::Syntax { column: 1, .. })));
        assert!(Permutation::new(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn relabeling_conjugates() {
        let g = Permutation::parse("(0 1 2)", 4).unwrap();
        let h = Permutation::parse("(0 3)", 4).unwrap();
        let r = g.relabeled(&h);
        assert_eq!(r.to_string(), "(1 2 3)");
        assert_eq!(r, h.inverse().then(&g).then(&h));
    }
}
