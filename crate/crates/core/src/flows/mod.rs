//! Common transversals by network flow, and the partitions built from them.

mod network;
pub mod wavy;

pub use network::{common_transversal, FlowNetwork};
pub use wavy::{
    canonical_type, is_wavy_network, wavy_census, wavy_latin, CensusOptions, CensusReport,
    WavyNetwork, WavyOutcome, DEFAULT_WAVY_BUDGET,
};

use crate::error::{Error, Result};
use crate::moves::Axis;
use crate::position::{Position, PositionArray, PositionSet};
use crate::state::SquareState;

/// Disjoint n-sets covering a ground set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatinPartition {
    pub parts: Vec<PositionSet>,
}

impl LatinPartition {
    /// Parts pairwise disjoint and every part latin in `state`.
    pub fn is_latin_in(&self, state: &SquareState) -> bool {
        let n = state.n();
        let mut seen = vec![false; n * n];
        for part in &self.parts {
            if !state.is_latin_set(part.iter()) {
                return false;
            }
            for p in part.iter() {
                if std::mem::replace(&mut seen[p.rank(n)], true) {
                    return false;
                }
            }
        }
        true
    }

    pub fn ground(&self, n: usize) -> Result<PositionSet> {
        PositionSet::new(
            n,
            self.parts.iter().flat_map(|s| s.iter().collect::<Vec<_>>()),
        )
    }
}

fn color_parts(state: &SquareState, cells: &[usize]) -> Vec<Vec<usize>> {
    let mut parts = vec![Vec::new(); state.n()];
    for &r in cells {
        parts[state.digit_at_rank(r)].push(r);
    }
    parts
}

fn check_pair(p: &SquareState, q: &SquareState) -> Result<usize> {
    if p.n() != q.n() {
        return Err(Error::SizeMismatch {
            expected: p.n(),
            found: q.n(),
        });
    }
    Ok(p.n())
}

/// Splits `v` (each color exactly `k` times under both states) into `k`
/// sets of size `n` that are latin in `p` and in `q`.
pub fn common_latin_partition(
    p: &SquareState,
    q: &SquareState,
    v: &PositionSet,
    k: usize,
) -> Result<LatinPartition> {
    let n = check_pair(p, q)?;
    if v.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: v.n(),
        });
    }
    if v.len() != k * n {
        return Err(Error::Precondition(format!(
            "#V = {} is not k n = {}",
            v.len(),
            k * n
        )));
    }
    let mut rest: Vec<usize> = v.iter().map(|c| c.rank(n)).collect();
    for (name, s) in [("P", p), ("Q", q)] {
        for (digit, part) in color_parts(s, &rest).iter().enumerate() {
            if part.len() != k {
                return Err(Error::Precondition(format!(
                    "digit {digit} occurs {} times in V under {name}, expected {k}",
                    part.len()
                )));
            }
        }
    }
    let mut parts = Vec::with_capacity(k);
    for round in 0..k {
        let t = common_transversal(
            &color_parts(p, &rest),
            &color_parts(q, &rest),
            &[],
            k - round,
            0,
        )?;
        rest.retain(|r| !t.contains(r));
        parts.push(PositionSet::from_ranks(n, t)?);
    }
    Ok(LatinPartition { parts })
}

/// A representation (`map[rank] = rank`) together with the parts it fixes
/// setwise outside the prescribed region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartRespecting {
    pub map: Vec<usize>,
    pub parts: Vec<PositionSet>,
}

/// Extends the color-preserving bijection `g` of `W` to a representation of
/// the transition `p -> q` mapping each part of a commonly latin partition of
/// the complement onto itself.
pub fn part_respecting_representation(
    p: &SquareState,
    q: &SquareState,
    w: &PositionSet,
    g: &[(Position, Position)],
) -> Result<PartRespecting> {
    let n = check_pair(p, q)?;
    if w.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: w.n(),
        });
    }
    let pre = |msg: String| Err(Error::Precondition(msg));
    let mut map = vec![usize::MAX; n * n];
    let mut hit = vec![false; n * n];
    for &(a, b) in g {
        a.check(n)?;
        b.check(n)?;
        if !w.contains(a) || !w.contains(b) {
            return pre(format!(
                "g maps ({}, {}) -> ({}, {}) outside W",
                a.col, a.row, b.col, b.row
            ));
        }
        let (ra, rb) = (a.rank(n), b.rank(n));
        if map[ra] != usize::MAX || hit[rb] {
            return pre(format!("g is not injective at ({}, {})", a.col, a.row));
        }
        if p.digit_at_rank(ra) != q.digit_at_rank(rb) {
            return pre(format!(
                "g does not preserve the color at ({}, {})",
                a.col, a.row
            ));
        }
        map[ra] = rb;
        hit[rb] = true;
    }
    if g.len() != w.len() {
        return pre(format!(
            "g defined on {} of {} cells of W",
            g.len(),
            w.len()
        ));
    }
    let mut count = vec![0usize; n];
    for c in w.iter() {
        count[p.digit(c)] += 1;
    }
    if count.iter().any(|&c| c != count[0]) {
        return pre("W does not consume each color equally".into());
    }
    let k = n - count[0];
    let v = PositionSet::new(
        n,
        (0..n * n)
            .filter(|&r| map[r] == usize::MAX)
            .map(|r| Position::from_rank(r, n)),
    )?;
    let partition = common_latin_partition(p, q, &v, k)?;
    for part in &partition.parts {
        let mut by_q = vec![usize::MAX; n];
        for c in part.iter() {
            by_q[q.digit(c)] = c.rank(n);
        }
        for c in part.iter() {
            map[c.rank(n)] = by_q[p.digit(c)];
        }
    }
    Ok(PartRespecting {
        map,
        parts: partition.parts,
    })
}

/// `n` disjoint latin H-graphs (axis H, ordered by column) or V-graphs
/// (axis V, ordered by row) covering the square.
pub fn latin_graph_partition(state: &SquareState, axis: Axis) -> Result<Vec<PositionArray>> {
    if axis == Axis::V {
        let h = latin_graph_partition(&state.transpose(), Axis::H)?;
        return Ok(h.iter().map(PositionArray::transpose).collect());
    }
    let n = state.n();
    let mut rest: Vec<usize> = (0..n * n).collect();
    let mut out = Vec::with_capacity(n);
    for round in 0..n {
        let mut cols = vec![Vec::new(); n];
        for &r in &rest {
            cols[r % n].push(r);
        }
        let t = common_transversal(&cols, &color_parts(state, &rest), &[], n - round, 0)?;
        rest.retain(|r| !t.contains(r));
        out.push(PositionArray::new(
            n,
            t.into_iter().map(|r| Position::from_rank(r, n)).collect(),
        )?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn check_graphs(s: &SquareState, graphs: &[PositionArray], axis: Axis) {
        let n = s.n();
        assert_eq!(graphs.len(), n);
        let mut seen = vec![false; n * n];
        for g in graphs {
            let set = g.to_set();
            match axis {
                Axis::H => assert!(set.is_h_graph()),
                Axis::V => assert!(set.is_v_graph()),
            }
            assert!(s.is_latin_set(g.iter()));
            for c in g.iter() {
                assert!(!std::mem::replace(&mut seen[c.rank(n)], true));
            }
        }
        assert!(seen.iter().all(|&b| b));
    }

    #[test]
    fn graph_partition_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in [2, 5, 9, 12] {
            let s = SquareState::random(n, &mut rng).unwrap();
            check_graphs(&s, &latin_graph_partition(&s, Axis::H).unwrap(), Axis::H);
            check_graphs(&s, &latin_graph_partition(&s, Axis::V).unwrap(), Axis::V);
        }
    }

    #[test]
    fn graph_partition_transpose_duality() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = SquareState::random(7, &mut rng).unwrap();
        let v = latin_graph_partition(&s, Axis::V).unwrap();
        let h = latin_graph_partition(&s.transpose(), Axis::H).unwrap();
        let ht: Vec<PositionArray> = h.iter().map(PositionArray::transpose).collect();
        assert_eq!(v, ht);
    }

    #[test]
    fn common_partition_small_pair() {
        // rows read left to right from column n-1
        let p = SquareState::parse("0 1 2\n0 2 1\n1 2 0").unwrap();
        let q = SquareState::parse("0 1 0\n1 2 2\n2 1 0").unwrap();
        let all = PositionSet::new(3, (0..9).map(|r| Position::from_rank(r, 3))).unwrap();
        let lp = common_latin_partition(&p, &q, &all, 3).unwrap();
        assert_eq!(lp.parts.len(), 3);
        assert!(lp.is_latin_in(&p) && lp.is_latin_in(&q));
    }

    #[test]
    fn common_partition_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let n = 8;
        let all = PositionSet::new(n, (0..n * n).map(|r| Position::from_rank(r, n))).unwrap();
        for _ in 0..10 {
            let p = SquareState::random(n, &mut rng).unwrap();
            let q = SquareState::random(n, &mut rng).unwrap();
            let lp = common_latin_partition(&p, &q, &all, n).unwrap();
            assert_eq!(lp.parts.len(), n);
            assert!(lp.parts.iter().all(|s| s.len() == n));
            assert!(lp.is_latin_in(&p) && lp.is_latin_in(&q));
            assert_eq!(lp.ground(n).unwrap(), all);
        }
    }

    #[test]
    fn common_partition_rejects_bad_counts() {
        let p = SquareState::row_index(3).unwrap();
        let v = PositionSet::from_pairs(3, &[(0, 0), (1, 0), (2, 0)]).unwrap();
        assert!(common_latin_partition(&p, &p, &v, 1).is_err());
    }

    fn check_rep(p: &SquareState, q: &SquareState, rep: &PartRespecting) {
        let n = p.n();
        let mut hit = vec![false; n * n];
        for (a, &b) in rep.map.iter().enumerate() {
            assert_eq!(p.digit_at_rank(a), q.digit_at_rank(b));
            assert!(!std::mem::replace(&mut hit[b], true));
        }
        for part in &rep.parts {
            for c in part.iter() {
                assert!(part.contains(Position::from_rank(rep.map[c.rank(n)], n)));
            }
        }
    }

    #[test]
    fn representation_fixing_a_latin_v_graph() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let n = 6;
        let p = SquareState::random(n, &mut rng).unwrap();
        let g = latin_graph_partition(&p, Axis::V).unwrap().remove(0);
        let w = g.to_set();
        // a random q agreeing with p on g
        let mut d = SquareState::random(n, &mut rng).unwrap().digits().to_vec();
        for c in g.iter() {
            let r = c.rank(n);
            let want = p.digit(c);
            if d[r] != want {
                let j = (0..n * n)
                    .find(|&j| d[j] == want && !w.contains(Position::from_rank(j, n)))
                    .unwrap();
                d.swap(r, j);
            }
        }
        let q = SquareState::new(n, d).unwrap();
        let pairs: Vec<(Position, Position)> = g.iter().map(|c| (c, c)).collect();
        let rep = part_respecting_representation(&p, &q, &w, &pairs).unwrap();
        assert_eq!(rep.parts.len(), n - 1);
        for c in g.iter() {
            assert_eq!(rep.map[c.rank(n)], c.rank(n));
        }
        check_rep(&p, &q, &rep);

        let empty = PositionSet::empty(n).unwrap();
        let rep = part_respecting_representation(&p, &q, &empty, &[]).unwrap();
        assert_eq!(rep.parts.len(), n);
        check_rep(&p, &q, &rep);
    }

    #[test]
    fn representation_on_everything_is_g() {
        let p = SquareState::cyclic_latin(3).unwrap();
        let all = PositionSet::new(3, (0..9).map(|r| Position::from_rank(r, 3))).unwrap();
        let g: Vec<(Position, Position)> = all.iter().map(|c| (c, c)).collect();
        let rep = part_respecting_representation(&p, &p, &all, &g).unwrap();
        assert_eq!(rep.map, (0..9).collect::<Vec<_>>());
        assert!(rep.parts.is_empty());
        let bad = vec![(Position::new(0, 0), Position::new(1, 0))];
        let w = PositionSet::from_pairs(3, &[(0, 0), (1, 0)]).unwrap();
        assert!(part_respecting_representation(&p, &p, &w, &bad).is_err());
    }
}
