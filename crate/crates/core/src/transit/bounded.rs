//! The 6n ± 3 compiler: fix a latin V-graph, then realize the remaining
//! transition part by part with cycles conjugated onto the bottom row.

use super::perm::carrier_and_last_points;
use crate::error::{Error, Result};
use crate::flows::{latin_graph_partition, part_respecting_representation};
use crate::moves::{Axis, ElementaryMove, MoveSequence};
use crate::optimize::{array_onto_graph, graph_to_graph_shuffle, in_guaranteed_range, KeyOptions};
use crate::position::{Position, PositionArray};
use crate::state::SquareState;

/// Shuffle bound `6n - 3` (n even) or `6n + 3` (n odd).
pub fn bounded_length_limit(n: usize) -> usize {
    if n % 2 == 0 {
        6 * n - 3
    } else {
        6 * n + 3
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompileReport {
    pub moves: MoveSequence,
    /// Cycle realizations performed (each 4½ shuffles before merging).
    pub cycle_steps: usize,
    pub limit_half_shuffles: usize,
}

/// Realizes cell cycles on the current state, up to color equivalence.
struct Realizer<'a> {
    n: usize,
    cur: SquareState,
    out: MoveSequence,
    opts: &'a KeyOptions,
    steps: usize,
}

impl Realizer<'_> {
    /// Lengthens `cycle` to `len` cells by inserting, right after some cell,
    /// unused cells of that cell's current color; the color effect stays
    /// the same. Cells in `taken` are never used.
    fn pad(&self, cycle: &[usize], len: usize, taken: &mut [bool]) -> Result<Vec<usize>> {
        let mut out = cycle.to_vec();
        for &c in cycle {
            taken[c] = true;
        }
        let m = self.n * self.n;
        if out.is_empty() {
            let start = (0..m)
                .find(|&c| !taken[c])
                .ok_or_else(|| Error::Internal("no free cell to pad an empty cycle".into()))?;
            taken[start] = true;
            out.push(start);
        }
        let mut at = 0;
        while out.len() < len {
            let color = self.cur.digit_at_rank(out[at]);
            match (0..m).find(|&c| !taken[c] && self.cur.digit_at_rank(c) == color) {
                Some(c) => {
                    taken[c] = true;
                    out.insert(at + 1, c);
                }
                None => {
                    at += 1;
                    if at == out.len() {
                        return Err(Error::Internal("padding cell unavailable".into()));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Sends `array[j]` to the bottom row at column `j`, rotates the bottom
    /// row by `shift` (content of column `j` moves to column `j + shift`)
    /// and undoes the first part.
    fn rotate_array(&mut self, array: &[usize], shift: usize) -> Result<()> {
        let n = self.n;
        let a = PositionArray::new(
            n,
            array.iter().map(|&r| Position::from_rank(r, n)).collect(),
        )?;
        let there = array_onto_graph(&a, &PositionArray::bottom_row(n), self.opts)?;
        let seq = there
            .clone()
            .then(&MoveSequence::from_moves(
                n,
                vec![ElementaryMove::single(Axis::H, n, 0, shift as i64)],
            )?)
            .then(&there.inverse());
        self.cur = self.cur.apply(&seq)?;
        self.out.extend(&seq);
        self.steps += 1;
        Ok(())
    }

    /// Content of `cycle[i]` moves to `cycle[i + 1]` (color-wise).
    fn cycle(&mut self, cycle: &[usize]) -> Result<()> {
        if cycle.len() < 2 {
            return Ok(());
        }
        let mut taken = vec![false; self.n * self.n];
        let padded = self.pad(cycle, self.n, &mut taken)?;
        self.rotate_array(&padded, 1)
    }

    /// Two disjoint cycles at once (n even): each padded to n/2 and
    /// interleaved, then rotated by two.
    fn double_cycle(&mut self, u: &[usize], v: &[usize]) -> Result<()> {
        let half = self.n / 2;
        let mut taken = vec![false; self.n * self.n];
        for &c in u.iter().chain(v) {
            taken[c] = true;
        }
        let pu = self.pad(u, half, &mut taken)?;
        let pv = self.pad(v, half, &mut taken)?;
        let array: Vec<usize> = pu.iter().zip(&pv).flat_map(|(&a, &b)| [a, b]).collect();
        self.rotate_array(&array, 2)
    }
}

/// Move sequence turning `p` into `q` within [`bounded_length_limit`]
/// shuffles, for the sizes where every n-set maps onto a graph by one
/// shuffle (2..=34 and 37).
pub fn bounded_compile(
    p: &SquareState,
    q: &SquareState,
    opts: &KeyOptions,
) -> Result<CompileReport> {
    let n = p.n();
    if q.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: q.n(),
        });
    }
    if !in_guaranteed_range(n) {
        return Err(Error::Unsupported(n));
    }
    let limit_half_shuffles = 2 * bounded_length_limit(n);
    if p == q {
        return Ok(CompileReport {
            moves: MoveSequence::new(n),
            cycle_steps: 0,
            limit_half_shuffles,
        });
    }

    // A latin V-graph of p, paired by color with a latin H-graph of q, and
    // a VH-shuffle sigma sending the H-graph back onto it.
    let g = latin_graph_partition(p, Axis::V)?.swap_remove(0);
    let h = latin_graph_partition(q, Axis::H)?.swap_remove(0);
    let by_color: Vec<Position> = {
        let mut v = vec![Position::new(0, 0); n];
        for c in h.iter() {
            v[q.digit(c)] = c;
        }
        v
    };
    let h_paired = PositionArray::new(n, g.iter().map(|c| by_color[p.digit(c)]).collect())?;
    let sigma = graph_to_graph_shuffle(&h_paired, &g)?;
    let q1 = q.apply(&sigma)?;

    // p -> q1 fixes g; the rest splits into n - 1 self-mapped parts.
    let w = g.to_set();
    let fixed: Vec<(Position, Position)> = g.iter().map(|c| (c, c)).collect();
    let rep = part_respecting_representation(p, &q1, &w, &fixed)?;
    let m = n * n;
    let mut parts: Vec<(Vec<usize>, Vec<usize>)> = Vec::with_capacity(n - 1);
    for part in &rep.parts {
        let mut local: Vec<usize> = (0..m).collect();
        for c in part.iter() {
            local[c.rank(n)] = rep.map[c.rank(n)];
        }
        let (carrier, last) = carrier_and_last_points(&local);
        // inverse of the last-point cycle, listed along its arcs
        let l_inv: Vec<usize> = last.iter().rev().copied().collect();
        parts.push((carrier, l_inv));
    }

    let mut rz = Realizer {
        n,
        cur: p.clone(),
        out: MoveSequence::new(n),
        opts,
        steps: 0,
    };
    if n % 2 == 0 {
        let single = parts.pop().expect("n - 1 >= 1 parts");
        for pair in parts.chunks(2) {
            let (u, v) = (&pair[0].1, &pair[1].1);
            if u.len() >= 2 || v.len() >= 2 {
                rz.double_cycle(u, v)?;
            }
            rz.cycle(&pair[0].0)?;
            rz.cycle(&pair[1].0)?;
        }
        rz.cycle(&single.1)?;
        rz.cycle(&single.0)?;
    } else {
        // Joining the two inverse last-point cycles of a pair into one
        // cycle costs the transposition of their final entries; all those
        // transpositions are done first, as two cycles.
        let mut joins: Vec<(usize, usize)> = Vec::new();
        let mut merged: Vec<Vec<usize>> = Vec::new();
        for pair in parts.chunks(2) {
            let (u, v) = (&pair[0].1, &pair[1].1);
            if !u.is_empty() && !v.is_empty() && u.len() + v.len() >= 3 {
                joins.push((*u.last().unwrap(), *v.last().unwrap()));
                merged.push(u.iter().chain(v).copied().collect());
            } else {
                merged.push(if u.len() >= 2 { u.clone() } else { v.clone() });
            }
        }
        match joins.len() {
            0 => {}
            1 => rz.cycle(&[joins[0].0, joins[0].1])?,
            _ => {
                let b_rev: Vec<usize> = joins.iter().rev().map(|&(_, b)| b).collect();
                let ab: Vec<usize> = joins.iter().flat_map(|&(a, b)| [a, b]).collect();
                rz.cycle(&b_rev)?;
                rz.cycle(&ab)?;
            }
        }
        for (pair, mc) in parts.chunks(2).zip(&merged) {
            rz.cycle(mc)?;
            rz.cycle(&pair[0].0)?;
            rz.cycle(&pair[1].0)?;
        }
    }
    if rz.cur != q1 {
        return Err(Error::Internal(
            "part-wise realization missed the target".into(),
        ));
    }
    let moves = rz.out.then(&sigma.inverse()).normalize();
    if &p.apply(&moves)? != q {
        return Err(Error::Internal(
            "compiled sequence does not reach the target".into(),
        ));
    }
    Ok(CompileReport {
        moves,
        cycle_steps: rz.steps,
        limit_half_shuffles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn identity_is_empty() {
        let p = SquareState::cyclic_latin(6).unwrap();
        let r = bounded_compile(&p, &p, &KeyOptions::default()).unwrap();
        assert!(r.moves.is_empty());
    }

    #[test]
    fn limits() {
        assert_eq!(bounded_length_limit(16), 93);
        assert_eq!(bounded_length_limit(5), 33);
    }

    #[test]
    fn random_pairs_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for n in 2..=9 {
            for _ in 0..4 {
                let p = SquareState::random(n, &mut rng).unwrap();
                let q = SquareState::random(n, &mut rng).unwrap();
                let r = bounded_compile(&p, &q, &KeyOptions::default()).unwrap();
                assert_eq!(p.apply(&r.moves).unwrap(), q);
                assert!(
                    r.moves.half_shuffles() <= r.limit_half_shuffles,
                    "n = {n}: {} half-shuffles",
                    r.moves.half_shuffles()
                );
            }
        }
    }

    #[test]
    fn pair_rotation_direction() {
        // bottom-row shift +2 on an interleaved array moves a[j] to a[j+2]
        let n = 4;
        let p = SquareState::cyclic_latin(n).unwrap();
        let opts = KeyOptions::default();
        let mut rz = Realizer {
            n,
            cur: p.clone(),
            out: MoveSequence::new(n),
            opts: &opts,
            steps: 0,
        };
        let array = [5, 6, 9, 14];
        rz.rotate_array(&array, 2).unwrap();
        let perm = rz.out.permutation();
        assert_eq!((perm[5], perm[6], perm[9], perm[14]), (9, 14, 5, 6));
        assert_eq!(rz.out.half_shuffles(), 9);
    }
}
