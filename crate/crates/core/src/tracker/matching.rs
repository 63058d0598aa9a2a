//! Minimum-cost perfect matching on a square cost matrix (Hungarian method with
//! potentials, O(n^3)).

/// Returns `assignment` with row `i` matched to column `assignment[i]`.
pub fn hungarian(cost: &[Vec<f64>]) -> Vec<usize> {
    let n = cost.len();
    if n == 0 {
        return Vec::new();
    }
    // 1-based arrays; column 0 is a virtual start.
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![inf; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = inf;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0usize; n];
    for j in 1..=n {
        if p[j] > 0 {
            assignment[p[j] - 1] = j - 1;
        }
    }
    assignment
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::permgroup::brute::closure;
    use crate::permgroup::Permutation;
    use crate::random::rng;
    use rand::Rng;

    #[test]
    fn matches_exhaustive_search() {
        let mut r = rng(3);
        for n in 1..=6 {
            let gens: Vec<Permutation> = if n == 1 {
                vec![]
            } else {
                let long: Vec<usize> = (0..n).collect();
                vec![
                    Permutation::from_cycles(n, &[&[0, 1]]).unwrap(),
                    Permutation::from_cycles(n, &[&long]).unwrap(),
                ]
            };
            let all = closure(n, &gens, 1000).unwrap();
            for _ in 0..20 {
                let cost: Vec<Vec<f64>> = (0..n).map(|_| (0..n).map(|_| r.random::<f64>()).collect()).collect();
                let a = hungarian(&cost);
                let total: f64 = a.iter().enumerate().map(|(i, &j)| cost[i][j]).sum();
                let best = all
                    .iter()
                    .map(|p| (0..n).map(|i| cost[i][p.apply(i)]).sum::<f64>())
                    .fold(f64::INFINITY, f64::min);
                assert!((total - best).abs() < 1e-12);
            }
        }
    }
}
