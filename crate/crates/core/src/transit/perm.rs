//! Permutations of ranks: cycle structure, last points and signs.

/// Cycles of length at least 2, each listed so that `perm` maps every entry
/// to the next and the final entry (the least one, its "last point") back
/// to the first. Cycles are ordered by their last points.
pub fn cycles_with_last_points(perm: &[usize]) -> Vec<Vec<usize>> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for start in 0..perm.len() {
        if seen[start] || perm[start] == start {
            continue;
        }
        // the least element of an unseen cycle is met first
        let mut cyc = Vec::new();
        let mut x = perm[start];
        seen[start] = true;
        while x != start {
            seen[x] = true;
            cyc.push(x);
            x = perm[x];
        }
        cyc.push(start);
        out.push(cyc);
    }
    out
}

/// The cycle `cycle[0] -> cycle[1] -> ... -> cycle[0]` as a permutation of
/// `0..len`.
pub fn cycle_perm(len: usize, cycle: &[usize]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..len).collect();
    for (i, &x) in cycle.iter().enumerate() {
        p[x] = cycle[(i + 1) % cycle.len()];
    }
    p
}

/// Ordered carrier (all cycles concatenated) and the cycle of last points.
/// The permutation equals the inverse of the last-point cycle followed by
/// the carrier cycle.
pub fn carrier_and_last_points(perm: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let cycles = cycles_with_last_points(perm);
    let last: Vec<usize> = cycles
        .iter()
        .map(|c| *c.last().expect("cycles are non-empty"))
        .collect();
    (cycles.concat(), last)
}

pub fn is_even(perm: &[usize]) -> bool {
    cycles_with_last_points(perm)
        .iter()
        .map(|c| c.len() - 1)
        .sum::<usize>()
        % 2
        == 0
}
