use super::group::UnionFind;
use super::perm::Permutation;

/// Finest block system in which `a` and `b` share a block (Atkinson's algorithm).
///
/// Returns the partition with blocks sorted internally and by smallest point. For a
/// transitive group this is a genuine block system; a single block means only the
/// trivial system contains `{a, b}`.
pub fn minimal_block(degree: usize, gens: &[Permutation], a: usize, b: usize) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(degree);
    let mut queue = Vec::new();
    if uf.union(a, b) {
        queue.push((a, b));
    }
    while let Some((x, y)) = queue.pop() {
        for g in gens {
            let (gx, gy) = (g.apply(x), g.apply(y));
            let (rx, ry) = (uf.find(gx), uf.find(gy));
            if rx != ry {
                uf.union(rx, ry);
                queue.push((rx, ry));
            }
        }
    }
    uf.classes()
}

/// Checks the block axiom for a partition under a generating set: every generator
/// maps each block onto a block.
pub fn is_block_system(partition: &[Vec<usize>], gens: &[Permutation]) -> bool {
    let degree: usize = partition.iter().map(Vec::len).sum();
    let mut owner = vec![usize::MAX; degree];
    for (i, block) in partition.iter().enumerate() {
        for &p in block {
            if p >= degree || owner[p] != usize::MAX {
                return false;
            }
            owner[p] = i;
        }
    }
    gens.iter().all(|g| {
        partition.iter().all(|block| {
            let target = owner[g.apply(block[0])];
            block.iter().all(|&p| owner[g.apply(p)] == target)
        })
    })
}
