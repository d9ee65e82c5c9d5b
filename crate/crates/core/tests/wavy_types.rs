//! Type counts of the census against an orbit count by Burnside's lemma over
//! color renaming, row and column permutations and transposition.

use equisquare::flows::{canonical_type, wavy_census, CensusOptions};
use equisquare::SquareState;
use proptest::prelude::*;
use std::collections::HashMap;

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn cycle_lengths(perm: &[usize]) -> Vec<usize> {
    let mut seen = vec![false; perm.len()];
    let mut out = Vec::new();
    for s in 0..perm.len() {
        let mut len = 0;
        let mut x = s;
        while !seen[x] {
            seen[x] = true;
            x = perm[x];
            len += 1;
        }
        if len > 0 {
            out.push(len);
        }
    }
    out
}

/// Squares fixed by a cell permutation with the given cycle lengths and a
/// color permutation with the given cycle lengths: a cell cycle of length
/// `l` carries one color orbit of size `o | l`, with `o` starting colors,
/// and adds `l / o` uses to every color of that orbit.
fn fixed_count(n: usize, cell_cycles: &[usize], color_orbits: &[usize]) -> u128 {
    let mut states: HashMap<Vec<usize>, u128> = HashMap::new();
    states.insert(vec![0; color_orbits.len()], 1);
    for &l in cell_cycles {
        let mut next: HashMap<Vec<usize>, u128> = HashMap::new();
        for (uses, ways) in &states {
            for (i, &o) in color_orbits.iter().enumerate() {
                if l % o != 0 || uses[i] + l / o > n {
                    continue;
                }
                let mut u = uses.clone();
                u[i] += l / o;
                *next.entry(u).or_default() += ways * o as u128;
            }
        }
        states = next;
    }
    states
        .get(&vec![n; color_orbits.len()])
        .copied()
        .unwrap_or(0)
}

fn burnside_types(n: usize) -> u128 {
    let perms = permutations(n);
    let mut total = 0u128;
    let mut order = 0u128;
    let mut cache: HashMap<(Vec<usize>, Vec<usize>), u128> = HashMap::new();
    for transpose in [false, true] {
        for rows in &perms {
            for cols in &perms {
                let cell: Vec<usize> = (0..n * n)
                    .map(|r| {
                        let (c, w) = (r % n, r / n);
                        let (c, w) = if transpose { (w, c) } else { (c, w) };
                        cols[c] + n * rows[w]
                    })
                    .collect();
                let mut cc = cycle_lengths(&cell);
                cc.sort_unstable();
                for colors in &perms {
                    let mut co = cycle_lengths(colors);
                    co.sort_unstable();
                    let key = (cc.clone(), co);
                    let f = *cache
                        .entry(key.clone())
                        .or_insert_with(|| fixed_count(n, &key.0, &key.1));
                    total += f;
                    order += 1;
                }
            }
        }
    }
    assert_eq!(total % order, 0);
    total / order
}

#[test]
fn census_type_counts_match_orbit_count() {
    for n in 2..=4 {
        let r = wavy_census(n, &CensusOptions::default(), None).unwrap();
        assert_eq!(r.types as u128, burnside_types(n), "n = {n}");
    }
}

#[test]
fn burnside_small_values() {
    assert_eq!(burnside_types(3), 10);
    assert_eq!(burnside_types(4), 2604);
}

fn act(
    s: &SquareState,
    rows: &[usize],
    cols: &[usize],
    colors: &[usize],
    transpose: bool,
) -> SquareState {
    let n = s.n();
    let mut d = vec![0; n * n];
    for r in 0..n * n {
        let (c, w) = (r % n, r / n);
        let (c2, w2) = if transpose { (w, c) } else { (c, w) };
        d[cols[c2] + n * rows[w2]] = colors[s.digits()[r]];
    }
    SquareState::new(n, d).unwrap()
}

fn perm_strategy(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<usize>>()).prop_shuffle()
}

proptest! {
    #[test]
    fn canonical_type_is_invariant(
        seed in any::<u64>(),
        n in 3usize..=4,
        t in any::<bool>(),
        pr in perm_strategy(4),
        pc in perm_strategy(4),
        pd in perm_strategy(4),
    ) {
        use rand::SeedableRng;
        let s = SquareState::random(n, &mut rand_chacha::ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let restrict = |p: &[usize]| p.iter().copied().filter(|&x| x < n).collect::<Vec<_>>();
        let moved = act(&s, &restrict(&pr), &restrict(&pc), &restrict(&pd), t);
        prop_assert_eq!(canonical_type(&s).unwrap(), canonical_type(&moved).unwrap());
    }
}
