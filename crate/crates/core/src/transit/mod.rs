//! Transitions between equi-n-squares and their compilation into move
//! sequences.

mod bounded;
pub mod perm;

pub use bounded::{bounded_compile, bounded_length_limit, CompileReport};

use crate::error::{Error, Result};
use crate::moves::{Axis, ElementaryMove, MoveSequence};
use crate::state::SquareState;

/// Half-shuffles spent per cell by [`naive_compile`]: at most `8 n²` in
/// total, i.e. `4 n²` shuffles.
pub const NAIVE_HALF_SHUFFLES_PER_CELL: usize = 8;

/// A source and target state, optionally with a cell bijection
/// (`map[rank] = rank`) representing the transition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transition {
    pub source: SquareState,
    pub target: SquareState,
    pub map: Option<Vec<usize>>,
}

impl Transition {
    pub fn new(source: SquareState, target: SquareState) -> Result<Self> {
        if source.n() != target.n() {
            return Err(Error::SizeMismatch {
                expected: source.n(),
                found: target.n(),
            });
        }
        Ok(Self {
            source,
            target,
            map: None,
        })
    }

    pub fn with_map(mut self, map: Vec<usize>) -> Result<Self> {
        if !is_representation(&self.source, &self.target, &map) {
            return Err(Error::Precondition(
                "map does not represent the transition".into(),
            ));
        }
        self.map = Some(map);
        Ok(self)
    }

    /// The stored map, or the color-by-color row-major matching.
    pub fn representation(&self) -> Vec<usize> {
        self.map
            .clone()
            .unwrap_or_else(|| default_representation(&self.source, &self.target))
    }
}

/// Whether moving each cell `i` to `f[i]` turns `p` into `q`.
pub fn is_representation(p: &SquareState, q: &SquareState, f: &[usize]) -> bool {
    let m = p.n() * p.n();
    if q.n() != p.n() || f.len() != m {
        return false;
    }
    let mut hit = vec![false; m];
    f.iter().enumerate().all(|(i, &j)| {
        j < m && !std::mem::replace(&mut hit[j], true) && p.digit_at_rank(i) == q.digit_at_rank(j)
    })
}

/// Matches the cells of each color in `p` to those in `q` in rank order.
pub fn default_representation(p: &SquareState, q: &SquareState) -> Vec<usize> {
    let m = p.n() * p.n();
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); p.n()];
    for j in (0..m).rev() {
        slots[q.digit_at_rank(j)].push(j);
    }
    (0..m)
        .map(|i| {
            slots[p.digit_at_rank(i)]
                .pop()
                .expect("equal multiplicities")
        })
        .collect()
}

/// Five moves realizing exactly the 3-cycle of ranks `0 -> 1 -> x -> 0`
/// with `x = k + n r`, `r >= 1`.
pub fn three_cycle_moves(k: usize, r: usize, n: usize) -> Result<MoveSequence> {
    if n < 2 {
        return Err(Error::InvalidSize(n));
    }
    if r == 0 || r >= n || k >= n {
        return Err(Error::Precondition(format!(
            "need 0 <= k < n and 1 <= r < n, got k = {k}, r = {r}"
        )));
    }
    let (ki, ri) = (k as i64, r as i64);
    let mut h1 = vec![0i64; n];
    h1[0] += 1;
    h1[r] += 1 - ki;
    let mut h3 = vec![0i64; n];
    h3[r] += ki - 1;
    let moves = vec![
        ElementaryMove::from_signed(Axis::H, &h1)?,
        ElementaryMove::single(Axis::V, n, 1, -ri),
        ElementaryMove::single(Axis::H, n, 0, -1),
        ElementaryMove::single(Axis::V, n, 1, ri),
        ElementaryMove::from_signed(Axis::H, &h3)?,
    ];
    MoveSequence::from_moves(n, moves)
}

/// One shuffle moving every cell `k` ranks up (mod n²): rows rotate by
/// `k mod n`, then each column rises by `k / n`, plus one for the columns
/// that wrapped.
pub fn long_cycle_power(n: usize, k: usize) -> Result<MoveSequence> {
    if n < 2 {
        return Err(Error::InvalidSize(n));
    }
    let k = k % (n * n);
    let (a, b) = (k % n, k / n);
    let h = ElementaryMove::uniform(Axis::H, n, a as i64);
    let v = ElementaryMove::new(
        Axis::V,
        (0..n).map(|c| (b + usize::from(c < a)) % n).collect(),
    )?;
    MoveSequence::from_moves(n, vec![h, v])
}

/// The n²-cycle `rank -> rank + 1`.
pub fn long_cycle_move(n: usize) -> Result<MoveSequence> {
    long_cycle_power(n, 1)
}

/// Exact 3-cycle `s -> s + 1 -> s + x -> s` (ranks mod n²), or its inverse,
/// as a conjugate of [`three_cycle_moves`] by long-cycle powers.
fn shifted_three_cycle(n: usize, s: usize, x: usize, inverse: bool) -> Result<MoveSequence> {
    let m = n * n;
    let core = three_cycle_moves(x % n, x / n, n)?;
    let core = if inverse { core.inverse() } else { core };
    Ok(long_cycle_power(n, m - s % m)?
        .then(&core)
        .then(&long_cycle_power(n, s)?)
        .normalize())
}

/// Ranks touched by the shifted 3-cycle and where their contents go.
fn three_cycle_arcs(m: usize, s: usize, x: usize, inverse: bool) -> [(usize, usize); 3] {
    let (a, b, c) = (s % m, (s + 1) % m, (s + x) % m);
    if inverse {
        [(a, c), (c, b), (b, a)]
    } else {
        [(a, b), (b, c), (c, a)]
    }
}

/// Generator-based compiler: fixes the target color rank by rank with
/// 3-cycles `(s, s+1, s+x)` conjugated by long-cycle powers. Uses at most
/// [`NAIVE_HALF_SHUFFLES_PER_CELL`] half-shuffles per cell.
pub fn naive_compile(p: &SquareState, q: &SquareState) -> Result<MoveSequence> {
    let n = p.n();
    if q.n() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: q.n(),
        });
    }
    let m = n * n;
    let mut cur = p.clone();
    let mut out = MoveSequence::new(n);
    for i in 0..m {
        let want = q.digit_at_rank(i);
        if cur.digit_at_rank(i) == want {
            continue;
        }
        let (s, x, inv) = choose_three_cycle(&cur, i, want)
            .ok_or_else(|| Error::Internal(format!("no 3-cycle fixes rank {i}")))?;
        let seq = shifted_three_cycle(n, s, x, inv)?;
        cur = cur.apply(&seq)?;
        debug_assert_eq!(cur.digit_at_rank(i), want);
        out.extend(&seq);
    }
    let out = out.normalize();
    debug_assert_eq!(&p.apply(&out)?, q);
    Ok(out)
}

/// A 3-cycle putting color `want` on rank `i` without changing the colors
/// of ranks below `i`.
fn choose_three_cycle(cur: &SquareState, i: usize, want: usize) -> Option<(usize, usize, bool)> {
    let n = cur.n();
    let m = n * n;
    let ok = |s: usize, x: usize, inv: bool| {
        three_cycle_arcs(m, s, x, inv).iter().all(|&(from, to)| {
            let d = cur.digit_at_rank(from);
            if to == i {
                d == want
            } else {
                to > i || d == cur.digit_at_rank(to)
            }
        })
    };
    let sources = (i + 1..m).filter(|&j| cur.digit_at_rank(j) == want);
    for j in sources {
        let d = j - i;
        // content of s + x lands on s = i
        if d >= n && ok(i, d, false) {
            return Some((i, d, false));
        }
        // content of s + 1 = j lands on s + x = i
        if d >= 2 && m + 1 - d >= n && m + 1 - d < m && ok(j - 1, m + 1 - d, false) {
            return Some((j - 1, m + 1 - d, false));
        }
        // inverse: content of s + 1 = j lands on s = i
        if d == 1 {
            for x in n..m {
                if ok(i, x, true) {
                    return Some((i, x, true));
                }
            }
        }
    }
    for s in 0..m {
        for x in n..m {
            for inv in [false, true] {
                if ok(s, x, inv) {
                    return Some((s, x, inv));
                }
            }
        }
    }
    None
}

/// Least number of shuffles separating some pair of states.
pub fn shuffle_distance_floor(n: usize) -> Result<usize> {
    crate::counting::shuffle_lower_bound(n)
}

#[cfg(test)]
mod tests {
    use super::perm::{cycle_perm, is_even};
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn three_cycle_exact() {
        for n in 2..=7 {
            for r in 1..n {
                for k in 0..n {
                    let seq = three_cycle_moves(k, r, n).unwrap();
                    assert_eq!(seq.half_shuffles(), 5);
                    assert_eq!(seq.shuffle_length(), "2½");
                    let x = k + n * r;
                    assert_eq!(
                        seq.permutation(),
                        cycle_perm(n * n, &[0, 1, x]),
                        "n={n} k={k} r={r}"
                    );
                }
            }
        }
        assert_eq!(
            three_cycle_moves(0, 1, 3).unwrap().permutation(),
            cycle_perm(9, &[0, 1, 3])
        );
        assert_eq!(
            three_cycle_moves(2, 3, 5).unwrap().permutation(),
            cycle_perm(25, &[0, 1, 17])
        );
        assert!(three_cycle_moves(1, 0, 4).is_err());
    }

    #[test]
    fn long_cycle() {
        let p = long_cycle_move(2).unwrap().permutation();
        assert_eq!(p, vec![1, 2, 3, 0]);
        for n in 2..=6 {
            let m = n * n;
            for k in 0..m {
                let p = long_cycle_power(n, k).unwrap().permutation();
                assert!(p.iter().enumerate().all(|(i, &j)| j == (i + k) % m));
            }
            let one = long_cycle_move(n).unwrap();
            let mut seq = MoveSequence::new(n);
            for _ in 0..m {
                seq.extend(&one);
            }
            assert_eq!(seq.permutation(), (0..m).collect::<Vec<_>>());
        }
    }

    #[test]
    fn shuffles_are_even_for_odd_n() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in [3, 5, 7] {
            for _ in 0..20 {
                for axis in [Axis::H, Axis::V] {
                    let mv =
                        ElementaryMove::new(axis, (0..n).map(|_| rng.gen_range(0..n)).collect())
                            .unwrap();
                    let seq = MoveSequence::from_moves(n, vec![mv]).unwrap();
                    assert!(is_even(&seq.permutation()));
                }
            }
        }
    }

    #[test]
    fn representations() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let p = SquareState::random(4, &mut rng).unwrap();
        let id: Vec<usize> = (0..16).collect();
        assert!(is_representation(&p, &p, &id));
        let (a, b) = (0..16)
            .flat_map(|a| (a + 1..16).map(move |b| (a, b)))
            .find(|&(a, b)| p.digit_at_rank(a) == p.digit_at_rank(b))
            .unwrap();
        let mut sw = id.clone();
        sw.swap(a, b);
        assert!(is_representation(&p, &p, &sw));
        let seq = long_cycle_power(4, 5).unwrap();
        let q = p.apply(&seq).unwrap();
        assert!(is_representation(&p, &q, &seq.permutation()));
        let f = default_representation(&p, &q);
        assert!(is_representation(&p, &q, &f));
        assert!(Transition::new(p.clone(), q.clone())
            .unwrap()
            .with_map(f)
            .is_ok());
    }

    #[test]
    fn naive_all_pairs_n2() {
        let mut states = Vec::new();
        for mask in 0u32..16 {
            if mask.count_ones() == 2 {
                states.push(
                    SquareState::new(2, (0..4).map(|i| (mask >> i & 1) as usize).collect())
                        .unwrap(),
                );
            }
        }
        assert_eq!(states.len(), 6);
        for p in &states {
            for q in &states {
                let seq = naive_compile(p, q).unwrap();
                assert_eq!(&p.apply(&seq).unwrap(), q);
                assert!(seq.half_shuffles() <= NAIVE_HALF_SHUFFLES_PER_CELL * 4);
                if p == q {
                    assert!(seq.is_empty());
                }
            }
        }
    }

    #[test]
    fn naive_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in [3, 4, 5, 6, 8] {
            for _ in 0..5 {
                let p = SquareState::random(n, &mut rng).unwrap();
                let q = SquareState::random(n, &mut rng).unwrap();
                let seq = naive_compile(&p, &q).unwrap();
                assert_eq!(p.apply(&seq).unwrap(), q);
                assert!(seq.half_shuffles() <= NAIVE_HALF_SHUFFLES_PER_CELL * n * n);
            }
        }
    }

    #[test]
    fn distance_floor() {
        assert_eq!(shuffle_distance_floor(2).unwrap(), 1);
        assert_eq!(shuffle_distance_floor(16).unwrap(), 8);
        assert_eq!(shuffle_distance_floor(30).unwrap(), 16);
    }
}
